"""Linearized dynamics in the displaced interaction frame.

Fluctuation operators obey ``dc/dt = M(t) c + lambda(t) + noise`` with
``c = (a1, a1^dag, b, b^dag, a2, a2^dag)``. The frame removes the free
cavity response ``E_j(t)`` to each drive, so the coefficients oscillate at
the mechanical frequency, the detunings and the cavity frequency gap
``delta2 - delta1``. Those phases are evaluated in closed form at every
time; nothing accumulates across steps.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import _ode
from .params import A1, A2, B, CONJ, SystemParams

SQRT2 = np.sqrt(2.0)


class DriveEnvelope:
    """Free driven cavity amplitude ``E_j(t) = (i E_j/Delta_j)(1 - exp(i Delta_j t))``.

    This is the classical displacement removed by the frame change; it
    starts at zero and never decays.
    """

    def __init__(self, params: SystemParams):
        self.amp = (1j * params.E1 / params.delta1, 1j * params.E2 / params.delta2)
        self.delta = (params.delta1, params.delta2)

    def __call__(self, j: int, t):
        if j not in (1, 2):
            raise ValueError(f"cavity index must be 1 or 2, got {j!r}")
        if np.ndim(t) == 0:
            return self.amp[j - 1] * (1.0 - cmath.exp(1j * self.delta[j - 1] * float(t)))
        t = np.asarray(t, dtype=float)
        return self.amp[j - 1] * (1.0 - np.exp(1j * self.delta[j - 1] * t))


def drive_envelope(params: SystemParams, j: int, t):
    return DriveEnvelope(params)(j, t)


class DriftMatrix:
    """Evaluator ``t -> M(t)`` for fixed parameters.

    Rows for a1, b and a2 are the coefficients of the linearized equations
    of motion; each adjoint row is the conjugate of its partner with the
    columns swapped within every (op, op^dag) pair.
    """

    def __init__(self, params: SystemParams):
        self.params = params
        self.envelope = DriveEnvelope(params)
        self.gap = params.delta2 - params.delta1

    def rows(self, t: float):
        """Coefficient rows of the a1, b and a2 equations as three length-6 lists."""
        p = self.params
        g = p.gm
        amp1, amp2 = self.envelope.amp
        E1t = amp1 * (1.0 - cmath.exp(1j * p.delta1 * t))
        E2t = amp2 * (1.0 - cmath.exp(1j * p.delta2 * t))
        rot = cmath.exp(1j * p.omega_m * t)
        irot = rot.conjugate()
        tun = cmath.exp(1j * self.gap * t)
        P1, P2 = 1j * g * E1t, 1j * g * E2t
        # d a1/dt
        row_a1 = [-p.kappa1, 0j, P1 * irot, P1 * rot, -1j * p.J * tun.conjugate(), 0j]
        # d b/dt
        gr = 1j * g * rot
        row_b = [gr * E1t.conjugate(), gr * E1t, -p.gamma_m, 0j,
                 -gr * E2t.conjugate(), -gr * E2t]
        # d a2/dt; tunneling phase is the adjoint of the a1 equation's (Hermitian hopping)
        row_a2 = [-1j * p.J * tun, 0j, -P2 * irot, -P2 * rot, -p.kappa2, 0j]
        return row_a1, row_b, row_a2

    def __call__(self, t: float) -> np.ndarray:
        out = [None] * 6
        for i, row in zip((A1, B, A2), self.rows(float(t))):
            out[i] = row
            out[CONJ[i]] = [complex(row[k]).conjugate() for k in CONJ]
        return np.array(out, dtype=complex)


def drift_matrix(params: SystemParams, t: float) -> np.ndarray:
    """The 6x6 drift matrix ``M(t)``."""
    return DriftMatrix(params)(t)


class DriveVector:
    """Evaluator ``t -> lambda(t)``, the coherent terms left by the frame displacement."""

    def __init__(self, params: SystemParams):
        self.params = params
        self.envelope = DriveEnvelope(params)
        self.gap = params.delta2 - params.delta1

    def __call__(self, t: float) -> np.ndarray:
        p = self.params
        t = float(t)
        E1t = self.envelope(1, t)
        E2t = self.envelope(2, t)
        tun = cmath.exp(1j * self.gap * t)
        lam1 = -1j * p.J / tun * E2t - p.kappa1 * E1t
        lam_b = 1j * p.gm * cmath.exp(1j * p.omega_m * t) * (abs(E1t) ** 2 - abs(E2t) ** 2)
        lam2 = -1j * p.J * tun * E1t - p.kappa2 * E2t
        return np.array([lam1, lam1.conjugate(), lam_b, lam_b.conjugate(),
                         lam2, lam2.conjugate()])


def drive_vector(params: SystemParams, t: float) -> np.ndarray:
    return DriveVector(params)(t)


@dataclass(frozen=True)
class Propagator:
    """Fundamental matrix ``Phi(t, tau)``; ``matrix[i, j]`` is ``d_{i+1, j+1}``."""

    matrix: np.ndarray
    tau: float
    t: float

    def d(self, i: int, j: int) -> complex:
        """Element with the 1-based indices used in the phonon formulas."""
        return self.matrix[i - 1, j - 1]


def integrate_propagator(params: SystemParams, tau: float, t: float,
                         tol: float = _ode.DEFAULT_RTOL) -> Propagator:
    """Solve ``dPhi/dt = M(t) Phi`` from ``Phi(tau, tau) = I``."""
    if not 0 <= tau <= t:
        raise ValueError(f"need 0 <= tau <= t, got tau={tau}, t={t}")

    M = DriftMatrix(params)

    def rhs(s, y):
        return (M(s) @ y.reshape(6, 6)).ravel()

    Y = _ode.integrate(rhs, tau, t, np.eye(6, dtype=complex).ravel(), [t],
                       rtol=tol, atol=tol * 1e-2, max_step=_ode.max_step(params))
    return Propagator(Y[-1].reshape(6, 6), tau, t)


def propagator_rows(params: SystemParams, t: float, rows, taus,
                    tol: float = _ode.DEFAULT_RTOL) -> np.ndarray:
    """Selected rows of ``Phi(t, tau)`` for many ``tau`` at fixed ``t``.

    Integrates the adjoint equation ``d/dtau Phi(t, tau) = -Phi(t, tau) M(tau)``
    backwards from ``tau = t``, so one pass yields every ``tau`` on the grid.

    Returns
    -------
    ndarray, shape (len(taus), len(rows), 6)
    """
    rows = list(rows)
    taus = np.asarray(taus, dtype=float)
    if taus.size and (taus.min() < 0 or taus.max() > t):
        raise ValueError("taus must lie in [0, t]")
    order = np.argsort(-taus, kind="stable")
    r0 = np.eye(6, dtype=complex)[rows].ravel()
    nr = len(rows)

    M = DriftMatrix(params)

    def rhs(s, y):
        return -(y.reshape(nr, 6) @ M(s)).ravel()

    Y = _ode.integrate(rhs, t, 0.0 if taus.size == 0 else float(taus.min()), r0,
                       taus[order], rtol=tol, atol=tol * 1e-2,
                       max_step=_ode.max_step(params))
    out = np.empty((taus.size, nr, 6), dtype=complex)
    out[order] = Y.reshape(-1, nr, 6)
    return out


@dataclass(frozen=True)
class MeanSeries:
    """First moments ``mu(t)`` of the interaction-frame operators, shape (n, 6)."""

    t: np.ndarray
    mu: np.ndarray


def integrate_means(params: SystemParams, t_max: float, dt_out: float,
                    tol: float = _ode.DEFAULT_RTOL) -> MeanSeries:
    """Solve ``dmu/dt = M(t) mu + lambda(t)`` from ``mu(0) = 0``."""
    t_eval = _ode.time_grid(t_max, dt_out)

    M = DriftMatrix(params)
    lam = DriveVector(params)

    def rhs(s, y):
        return M(s) @ y + lam(s)

    Y = _ode.integrate(rhs, 0.0, float(t_eval[-1]), np.zeros(6), t_eval,
                       rtol=tol, atol=_ode.DEFAULT_ATOL,
                       max_step=_ode.max_step(params, bare_drives=True))
    return MeanSeries(t_eval, Y)


def quadratures(means: MeanSeries, params: SystemParams):
    """Cavity quadratures and mechanical displacement ``(X_c1, X_c2, X_m)``.

    The frame displacement ``E_j(t)`` is added back to the cavity means, so
    the results refer to the frame rotating at each cavity frequency (the
    same frame as :mod:`mimcool.meanfield`).
    """
    t = means.t
    env = DriveEnvelope(params)
    Xc1 = SQRT2 * np.real(means.mu[:, A1] + env(1, t))
    Xc2 = SQRT2 * np.real(means.mu[:, A2] + env(2, t))
    Xm = SQRT2 * np.real(means.mu[:, B])
    return Xc1, Xc2, Xm
