"""Factorized nonlinear mean-field equations.

Expectation values of the full (un-linearized) Langevin equations with
products of operators replaced by products of means. Cavity amplitudes are
in frames rotating at their own cavity frequency and the mechanical one at
``omega_m``, which is the frame in which the linearized means plus the
drive envelope ``E_j(t)`` live, so the two solvers compare directly.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import _ode
from .params import SystemParams

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class MeanFieldSeries:
    """Amplitudes ``alpha1``, ``beta``, ``alpha2`` sampled on ``t``."""

    t: np.ndarray
    alpha1: np.ndarray
    beta: np.ndarray
    alpha2: np.ndarray


def meanfield_rhs(params: SystemParams):
    p = params
    gap = p.delta2 - p.delta1

    def rhs(t, y):
        a1, b, a2 = y
        rot = cmath.exp(1j * p.omega_m * t)
        tun = cmath.exp(1j * gap * t)
        x = b / rot + b.conjugate() * rot
        da1 = (-p.kappa1 * a1 + 1j * p.gm * x * a1 - 1j * p.J / tun * a2
               + p.E1 * cmath.exp(1j * p.delta1 * t))
        db = -p.gamma_m * b + 1j * p.gm * rot * (abs(a1) ** 2 - abs(a2) ** 2)
        da2 = (-p.kappa2 * a2 - 1j * p.gm * x * a2 - 1j * p.J * tun * a1
               + p.E2 * cmath.exp(1j * p.delta2 * t))
        return np.array([da1, db, da2])

    return rhs


def integrate_meanfield(params: SystemParams, t_max: float, dt_out: float,
                        tol: float = _ode.DEFAULT_RTOL) -> MeanFieldSeries:
    """Integrate from zero amplitudes (no noise terms; their means vanish)."""
    t_eval = _ode.time_grid(t_max, dt_out)
    Y = _ode.integrate(meanfield_rhs(params), 0.0, float(t_eval[-1]), np.zeros(3), t_eval,
                       rtol=tol, atol=_ode.DEFAULT_ATOL,
                       max_step=_ode.max_step(params, bare_drives=True))
    return MeanFieldSeries(t_eval, Y[:, 0], Y[:, 1], Y[:, 2])


def meanfield_quadratures(series: MeanFieldSeries):
    """``(X_c1, X_c2, X_m)`` as ``sqrt(2) Re`` of each amplitude."""
    return (SQRT2 * series.alpha1.real, SQRT2 * series.alpha2.real, SQRT2 * series.beta.real)
