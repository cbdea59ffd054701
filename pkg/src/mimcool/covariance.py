"""Second moments of the fluctuations and the thermal phonon number.

The coherent drive only shifts first moments, so the thermal occupation
``n_m = <b^dag b> - |<b>|^2`` is carried entirely by the zero-mean
fluctuation state. Its second-moment matrix ``S_ij = <c_i c_j>`` obeys

    dS/dt = M(t) S + S M(t)^T + D

with a plain transpose (the vector already holds the daggered operators)
and a constant diffusion matrix ``D``: the frame phases multiplying the
noise operators cancel in same-time correlators.

Two routes are provided. :func:`integrate_covariance` is the production
path, linear in the run length. :func:`phonon_oracle` assembles ``n_m(t)``
from propagator elements, the initial-state part plus a noise integral over
``tau``, and is quadratic in ``t``; it exists to cross-check the first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import simpson

from . import _ode
from ._io import param_header, write_csv
from .errors import CommutatorDrift, NegativePhonon, NumericalError, QuadratureNotConverged
from .params import A1, A1D, A2, A2D, B, BD, SystemParams
from .propagator import DriftMatrix, integrate_propagator, propagator_rows

COMMUTATOR_PAIRS = ((A1, A1D), (B, BD), (A2, A2D))


def diffusion_matrix(params: SystemParams) -> np.ndarray:
    """Same-time noise correlator strengths; cavity baths are at zero temperature."""
    D = np.zeros((6, 6))
    D[A1, A1D] = 2 * params.kappa1
    D[B, BD] = 2 * params.gamma_m * (params.n_th + 1)
    D[BD, B] = 2 * params.gamma_m * params.n_th
    D[A2, A2D] = 2 * params.kappa2
    return D


def initial_moments(params: SystemParams) -> np.ndarray:
    """Vacuum cavities and a thermal mechanical mode at ``n_th``."""
    S = np.zeros((6, 6), dtype=complex)
    S[A1, A1D] = 1.0
    S[B, BD] = params.n_th + 1
    S[BD, B] = params.n_th
    S[A2, A2D] = 1.0
    return S


def commutators(sigma: np.ndarray) -> np.ndarray:
    """``S[i, i^dag] - S[i^dag, i]`` for the three modes; shape ``(..., 3)``."""
    return np.stack([sigma[..., i, j] - sigma[..., j, i] for i, j in COMMUTATOR_PAIRS], axis=-1)


@dataclass(frozen=True)
class CovarianceSeries:
    t: np.ndarray
    sigma: np.ndarray  # (n, 6, 6)

    @property
    def commutator_error(self) -> float:
        return float(np.max(np.abs(commutators(self.sigma) - 1.0)))

    @property
    def n_m(self) -> np.ndarray:
        return self.sigma[:, BD, B].real


def integrate_covariance(params: SystemParams, t_max: float, dt_out: float,
                         tol: float = _ode.DEFAULT_RTOL) -> CovarianceSeries:
    """Propagate the fluctuation second moments from :func:`initial_moments`.

    Raises
    ------
    StepSizeUnderflow
        If the integrator cannot meet ``tol``.
    CommutatorDrift
        If a commutator departs from 1 by more than ``1e3 * tol``.
    """
    t_eval = _ode.time_grid(t_max, dt_out)
    M = DriftMatrix(params)
    D = diffusion_matrix(params)

    def rhs(s, y):
        S = y.reshape(6, 6)
        Ms = M(s)
        return (Ms @ S + S @ Ms.T + D).ravel()

    scale = max(1.0, params.n_th)
    Y = _ode.integrate(rhs, 0.0, float(t_eval[-1]), initial_moments(params).ravel(), t_eval,
                       rtol=tol, atol=tol * 1e-2 * scale, max_step=_ode.max_step(params))
    series = CovarianceSeries(t_eval, Y.reshape(-1, 6, 6))
    drift = series.commutator_error
    if drift > 1e3 * tol:
        raise CommutatorDrift(f"commutator deviates by {drift:.3g} (tol {tol:g})")
    return series


def thermal_phonon_number(sigma: np.ndarray, tol: float = 1e-6) -> float:
    """``<b^dag b>`` of a zero-mean state, i.e. the thermal phonon number.

    Values in ``[-tol, 0)`` are roundoff and are clamped to zero.
    """
    value = complex(sigma[BD, B])
    scale = max(1.0, abs(value.real))
    if abs(value.imag) > tol * scale:
        raise NumericalError(f"<b^dag b> has imaginary part {value.imag:.3g}")
    if value.real < -tol * scale:
        raise NegativePhonon(f"<b^dag b> = {value.real:.6g} < 0")
    return max(value.real, 0.0)


def _oracle_step(params: SystemParams) -> float:
    w = (2 * (params.omega_m + max(abs(params.delta1), abs(params.delta2)))
         + abs(params.delta2 - params.delta1) + 2 * max(params.kappa1, params.kappa2))
    return 0.2 / w


def phonon_oracle(params: SystemParams, t: float, tol: float = _ode.DEFAULT_RTOL,
                  quad_tol: float | None = None) -> float:
    """Thermal phonon number at ``t`` from propagator elements ``d_ij``.

    Initial-state part, with ``d_ij = Phi(t, 0)_ij``::

        d32 d41 + d33 d44 n_th + d34 d43 (n_th + 1) + d36 d45

    Noise part::

        int_0^t [2 k1 d32 d41 + 2 gamma_m n_th d33 d44
                 + 2 gamma_m (n_th + 1) d34 d43 + 2 k2 d36 d45](t, tau) dtau

    Rows 3 and 4 of ``Phi(t, tau)`` for all ``tau`` come from one backward
    pass of :func:`~mimcool.propagator.propagator_rows`; the ``tau = 0``
    sample is the initial-state propagator. The ``tau`` integral uses
    composite Simpson on a grid resolving the fastest coefficient
    frequency, and the step-doubling estimate must stay
    below ``quad_tol`` (default ``1e-6 * (n_th + 1)``).
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    n = params.n_th
    if t == 0:
        d = integrate_propagator(params, 0.0, 0.0, tol).d
        return float((d(3, 2) * d(4, 1) + d(3, 3) * d(4, 4) * n
                      + d(3, 4) * d(4, 3) * (n + 1) + d(3, 6) * d(4, 5)).real)

    steps = 4 * max(2, math.ceil(t / _oracle_step(params) / 4))
    taus = np.linspace(0.0, t, steps + 1)
    rows = propagator_rows(params, t, [B, BD], taus, tol)
    # 0-based columns: d3j -> r3[:, j-1], d4j -> r4[:, j-1]
    r3, r4 = rows[:, 0, :], rows[:, 1, :]
    # tau = 0 entry of the same pass supplies d_ij(t, 0)
    initial = (r3[0, 1] * r4[0, 0] + r3[0, 2] * r4[0, 3] * n
               + r3[0, 3] * r4[0, 2] * (n + 1) + r3[0, 5] * r4[0, 4])
    f = (2 * params.kappa1 * r3[:, 1] * r4[:, 0]
         + 2 * params.gamma_m * n * r3[:, 2] * r4[:, 3]
         + 2 * params.gamma_m * (n + 1) * r3[:, 3] * r4[:, 2]
         + 2 * params.kappa2 * r3[:, 5] * r4[:, 4])
    fine = simpson(f, x=taus)
    coarse = simpson(f[::2], x=taus[::2])
    if quad_tol is None:
        quad_tol = 1e-6 * (n + 1)
    err = abs(fine - coarse) / 15
    if err > quad_tol:
        raise QuadratureNotConverged(f"Simpson error estimate {err:.3g} > {quad_tol:.3g}")
    total = initial + fine
    return float(total.real)


def _window_mean(t, y, start, stop):
    mask = (t > start) & (t < stop)
    ts = np.concatenate(([start], t[mask], [stop]))
    ys = np.concatenate(([np.interp(start, t, y)], y[mask], [np.interp(stop, t, y)]))
    return np.trapezoid(ys, ts) / (stop - start)


def averaging_window(t, period: float, window_frac: float = 0.1) -> float:
    """Trailing window length, rounded down to whole oscillation periods."""
    width = window_frac * (t[-1] - t[0])
    if width >= period:
        width = math.floor(width / period) * period
    return width


def extract_final(t, n_m, period: float, window_frac: float = 0.1,
                  rel_tol: float = 1e-3) -> tuple[float, bool]:
    """Stable phonon number from the tail of a series.

    Averages over the trailing ``window_frac`` of the run, trimmed to an
    integer number of ``period`` (the mechanical period) so the fast
    oscillation drops out. The run counts as converged when that mean
    differs from the mean over the preceding window of equal length by less
    than ``rel_tol`` (relative).
    """
    t = np.asarray(t, dtype=float)
    n_m = np.asarray(n_m, dtype=float)
    if t.size < 2:
        return float(n_m[-1]), False
    width = averaging_window(t, period, window_frac)
    end = t[-1]
    last = _window_mean(t, n_m, end - width, end)
    if end - 2 * width < t[0] - 1e-12 * abs(end):
        return float(last), False
    prev = _window_mean(t, n_m, end - 2 * width, end - width)
    converged = abs(last - prev) <= rel_tol * abs(last) if last != 0 else prev == 0
    return float(last), bool(converged)


def convergence_hints(t, n_m, period: float, window_frac: float = 0.1,
                      rel_tol: float = 1e-3) -> np.ndarray:
    """Per-sample flag: would :func:`extract_final` report convergence at this time.

    Uses the final window width for every sample; samples with less than two
    windows of history are flagged 0.
    """
    t = np.asarray(t, dtype=float)
    n_m = np.asarray(n_m, dtype=float)
    width = averaging_window(t, period, window_frac)
    hints = np.zeros(t.size, dtype=int)
    if width <= 0:
        return hints
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (n_m[1:] + n_m[:-1]) * np.diff(t))))

    def mean(a, b):
        return (np.interp(b, t, cum) - np.interp(a, t, cum)) / width

    ok = t - 2 * width >= t[0] - 1e-12
    tt = t[ok]
    last = mean(tt - width, tt)
    prev = mean(tt - 2 * width, tt - width)
    hints[ok] = (np.abs(last - prev) <= rel_tol * np.abs(last)).astype(int)
    return hints


@dataclass
class CoolingResult:
    params: SystemParams
    t: np.ndarray
    n_m: np.ndarray
    n_m_final: float
    converged: bool
    commutator_error: float
    window_frac: float = 0.1
    rel_tol: float = 1e-3
    extra: dict = field(default_factory=dict)

    @property
    def cooling_ratio(self) -> float:
        """``n_m_final / (Gamma_m n_th)`` with ``Gamma_m = gamma_m / kappa1``."""
        denom = self.params.derived.Gamma_m * self.params.n_th
        return self.n_m_final / denom if denom > 0 else math.nan

    @property
    def period(self) -> float:
        return 2 * math.pi / self.params.omega_m


def simulate_cooling(params: SystemParams, t_max: float, dt_out: float | None = None,
                     tol: float = _ode.DEFAULT_RTOL, window_frac: float = 0.1,
                     rel_tol: float = 1e-3) -> CoolingResult:
    """Full dynamical cooling run: ``n_m(t)`` plus the extracted final value."""
    period = 2 * math.pi / params.omega_m
    if dt_out is None:
        dt_out = period / 16
    series = integrate_covariance(params, t_max, dt_out, tol)
    check_tol = max(1e-6, 1e3 * tol)
    n_m = np.array([thermal_phonon_number(s, check_tol) for s in series.sigma])
    final, converged = extract_final(series.t, n_m, period, window_frac, rel_tol)
    return CoolingResult(params, series.t, n_m, max(final, 0.0), converged,
                         series.commutator_error, window_frac, rel_tol)


def write_timeseries_csv(result: CoolingResult, path: str | Path, header: list[str] = ()) -> None:
    """Columns ``t, n_m, converged_hint``; ``#`` lines echo the parameters first."""
    hints = convergence_hints(result.t, result.n_m, result.period,
                              result.window_frac, result.rel_tol)
    header = param_header(result.params) + list(header)
    write_csv(path, header, ["t", "n_m", "converged_hint"],
              zip(result.t, result.n_m, hints))
