"""Thin wrapper over scipy's embedded Runge-Kutta integrators."""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

from .errors import StepSizeUnderflow
from .params import SystemParams

METHOD = "DOP853"
DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10


def active_frequencies(params: SystemParams, *, bare_drives: bool = False) -> list[float]:
    """Angular frequencies that actually appear in the linearized coefficients.

    Optomechanical entries carry ``omega_m`` and ``delta_j`` only when
    ``g_m E_j != 0``; the tunneling phase carries ``delta2 - delta1`` only
    when ``J != 0``. ``bare_drives`` adds ``delta_j`` for every nonzero
    ``E_j``, as needed by the mean-field equations.
    """
    freqs = []
    for E, delta in ((params.E1, params.delta1), (params.E2, params.delta2)):
        if E != 0 and (params.gm != 0 or bare_drives):
            freqs.append(abs(delta))
        if E != 0 and params.gm != 0:
            freqs.append(params.omega_m)
    if params.J != 0:
        freqs.append(abs(params.delta2 - params.delta1))
    return [w for w in freqs if w > 0]


def max_step(params: SystemParams, *, bare_drives: bool = False) -> float:
    """Step cap of 1/20 of the fastest coefficient period (unbounded if none oscillate)."""
    freqs = active_frequencies(params, bare_drives=bare_drives)
    if not freqs:
        return math.inf
    return (2 * math.pi / max(freqs)) / 20


def time_grid(t_max: float, dt_out: float) -> np.ndarray:
    if t_max < 0 or dt_out <= 0:
        raise ValueError("need t_max >= 0 and dt_out > 0")
    n = max(1, int(round(t_max / dt_out)))
    return np.linspace(0.0, t_max, n + 1)


def integrate(fun, t0, t1, y0, t_eval, *, rtol, atol, max_step):
    """Integrate ``y' = fun(t, y)``; returns ``Y`` with shape ``(len(t_eval), n)``."""
    y0 = np.asarray(y0, dtype=complex)
    t_eval = np.asarray(t_eval, dtype=float)
    if t0 == t1:
        return np.repeat(y0[None, :], len(t_eval), axis=0)
    sol = solve_ivp(fun, (t0, t1), y0, method=METHOD, t_eval=t_eval,
                    rtol=rtol, atol=atol, max_step=max_step)
    if sol.status != 0:
        raise StepSizeUnderflow(f"integration from {t0} to {t1} failed: {sol.message}")
    return sol.y.T
