"""Resolved-sideband limit and closed-form cooling limits.

For ``omega_m -> infinity`` with red-sideband drives and no tunneling, the
counter-rotating (squeezing) couplings average out and the rotating ones
become constant, ``g_m E_j / omega_m = J_Ej * kappa1``. The drift matrix is
then time independent and the steady second moments solve the Lyapunov
equation ``M S + S M^T + D = 0``.

The closed forms below are asymptotic cooling ratios
``n_mf / (Gamma_m n_th)`` and optimal damping ratios. Only the equal-damping
formula is an exact steady state of this model; the unequal-damping
optimum formulas do not coincide with the numerical argmin, and
:func:`argmin_kappa2` exists to measure that offset.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covariance import diffusion_matrix
from .errors import DegenerateDrive, DomainError, SingularLyapunov, TunnelingNotZero
from .params import A1, A1D, A2, A2D, B, BD, SystemParams, validate

SQRT6 = math.sqrt(6.0)
SQRT3 = math.sqrt(3.0)


def adiabatic_matrix(params: SystemParams) -> np.ndarray:
    """Constant beam-splitter drift matrix of the resolved-sideband limit."""
    if params.J != 0:
        raise TunnelingNotZero(f"resolved-sideband reduction needs J = 0, got {params.J}")
    G1 = params.gm * params.E1 / params.omega_m
    G2 = params.gm * params.E2 / params.omega_m
    M = np.diag([-params.kappa1, -params.kappa1, -params.gamma_m,
                 -params.gamma_m, -params.kappa2, -params.kappa2]).astype(complex)
    # signs follow the linearized equations: a1 couples with +, a2 with -
    M[A1, B] = M[A1D, BD] = G1
    M[B, A1] = M[BD, A1D] = -G1
    M[B, A2] = M[BD, A2D] = G2
    M[A2, B] = M[A2D, BD] = -G2
    return M


def solve_lyapunov(M: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Solve ``M S + S M^T + D = 0`` through the vectorized 36x36 system."""
    M = np.asarray(M, dtype=complex)
    eig = np.linalg.eigvals(M)
    if np.max(eig.real) >= 0:
        raise SingularLyapunov(f"drift matrix not stable: max Re(eig) = {np.max(eig.real):.3g}")
    n = M.shape[0]
    eye = np.eye(n)
    # row-major vec: vec(M S) = (M kron I) vec S, vec(S M^T) = (I kron M) vec S
    L = np.kron(M, eye) + np.kron(eye, M)
    S = np.linalg.solve(L, -np.asarray(D, dtype=complex).ravel())
    return S.reshape(n, n)


def lyapunov_residual(M, S, D) -> float:
    return float(np.linalg.norm(M @ S + S @ M.T + D))


def steady_state_phonon(M: np.ndarray, D: np.ndarray) -> float:
    """Steady ``<b^dag b>`` of a stable constant drift matrix."""
    S = solve_lyapunov(M, D)
    return float(S[BD, B].real)


def effective_params(Gamma_m: float, J_E1: float, J_E2: float, kappa2_ratio: float = 1.0,
                     n_th: float = 100.0, omega_m: float = 1e3, gm: float = 1e-5) -> SystemParams:
    """A kappa1 = 1 parameter set realising the given dimensionless inputs."""
    return validate(SystemParams(
        kappa1=1.0, kappa2=kappa2_ratio, gm=gm, omega_m=omega_m, gamma_m=Gamma_m,
        delta1=omega_m, delta2=omega_m, E1=J_E1 * omega_m / gm, E2=J_E2 * omega_m / gm,
        J=0.0, n_th=n_th,
    ))


def lyapunov_ratio(Gamma_m: float, J_E1: float, J_E2: float, kappa2_ratio: float = 1.0) -> float:
    """Cooling ratio ``n_mf / (Gamma_m n_th)`` from the Lyapunov steady state."""
    p = effective_params(Gamma_m, J_E1, J_E2, kappa2_ratio)
    n = steady_state_phonon(adiabatic_matrix(p), diffusion_matrix(p))
    return n / (Gamma_m * p.n_th)


def cooling_ratio_caseA(Gamma_m: float, J_E1: float, J_E2: float) -> float:
    """Equal cavity damping: exact steady-state cooling ratio."""
    s = J_E1 ** 2 + J_E2 ** 2
    return (1 + Gamma_m + s) / ((1 + Gamma_m) * (Gamma_m + s))


def _optimal_kappa2(Gamma_m: float, weight: float) -> float:
    radicand = weight - 3 + 2 * Gamma_m - Gamma_m ** 2
    if radicand < 0:
        raise DomainError(f"negative radicand {radicand:.6g}; drives too weak for this formula")
    return (1 + Gamma_m + math.sqrt(radicand)) / 2


def optimal_kappa2_caseB(Gamma_m: float, J_E: float) -> float:
    """Closed-form optimal ``kappa2/kappa1`` for equal drives."""
    return _optimal_kappa2(Gamma_m, 24 * J_E ** 2)


def limit_caseB(J_E: float) -> float:
    """Asymptotic cooling ratio for equal drives at the closed-form optimal damping."""
    return 4 * SQRT6 / (3 * J_E)


def optimal_kappa2_caseC(Gamma_m: float, J_E1: float, J_E2: float) -> float:
    """Closed-form optimal ``kappa2/kappa1`` for unequal drives."""
    return _optimal_kappa2(Gamma_m, 12 * J_E1 ** 2 + 12 * J_E2 ** 2)


def limit_caseC(J_E1: float, J_E2: float) -> float:
    """Asymptotic cooling ratio for unequal drives."""
    if J_E2 == 0:
        raise DegenerateDrive("limit diverges for an undriven second cavity")
    return 4 * SQRT3 * math.hypot(J_E1, J_E2) / (3 * J_E2 ** 2)


def _golden(f, lo: float, hi: float, rel_tol: float) -> float:
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > rel_tol * (a + b) / 2:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2


def argmin_kappa2(Gamma_m: float, J_E1: float, J_E2: float, upper: float | None = None,
                  points: int = 200, rel_tol: float = 1e-4) -> tuple[float, float]:
    """Brute-force optimum of the Lyapunov cooling ratio over ``kappa2/kappa1``.

    Log grid over ``[1, upper]`` followed by golden-section refinement
    around the best grid point. ``upper`` defaults to ten times the
    closed-form optimum, or 50 when that formula is out of its domain.

    Returns ``(kappa2_ratio, cooling_ratio)``.
    """
    if upper is None:
        try:
            upper = 10 * optimal_kappa2_caseC(Gamma_m, J_E1, J_E2)
        except DomainError:
            upper = 50.0
    grid = np.geomspace(1.0, upper, points)
    values = [lyapunov_ratio(Gamma_m, J_E1, J_E2, k) for k in grid]
    i = int(np.argmin(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, points - 1)]
    k = _golden(lambda x: lyapunov_ratio(Gamma_m, J_E1, J_E2, x), lo, hi, rel_tol)
    return k, lyapunov_ratio(Gamma_m, J_E1, J_E2, k)


@dataclass(frozen=True)
class CoolingLimitReport:
    case: str
    Gamma_m: float
    J_E1: float
    J_E2: float
    kappa2_ratio: float
    closed_form: float
    lyapunov: float
    error: str = ""

    @property
    def rel_gap(self) -> float:
        if self.error or self.closed_form == 0:
            return math.nan
        return abs(self.lyapunov - self.closed_form) / abs(self.closed_form)


def report(case: str, Gamma_m: float, J_E1: float, J_E2: float | None = None) -> CoolingLimitReport:
    """Closed form against the Lyapunov solve for one input point.

    Case A uses ``kappa2 = kappa1``; cases B (``J_E2 = J_E1``) and C use the
    closed-form optimal ``kappa2``. Domain failures are recorded in ``error``.
    """
    case = case.upper()
    if case == "B":
        J_E2 = J_E1
    if J_E2 is None:
        raise ValueError(f"case {case} needs J_E2")
    nan = math.nan
    try:
        if case == "A":
            k2 = 1.0
            closed = cooling_ratio_caseA(Gamma_m, J_E1, J_E2)
        elif case == "B":
            k2 = optimal_kappa2_caseB(Gamma_m, J_E1)
            closed = limit_caseB(J_E1)
        elif case == "C":
            closed = limit_caseC(J_E1, J_E2)
            k2 = optimal_kappa2_caseC(Gamma_m, J_E1, J_E2)
        else:
            raise ValueError(f"unknown case {case!r}")
    except (DomainError, DegenerateDrive) as exc:
        return CoolingLimitReport(case, Gamma_m, J_E1, J_E2, nan, nan, nan,
                                  f"{type(exc).__name__}: {exc}")
    return CoolingLimitReport(case, Gamma_m, J_E1, J_E2, k2, closed,
                              lyapunov_ratio(Gamma_m, J_E1, J_E2, k2))
