"""Run orchestration: single runs, sweeps, solver comparison, limit reports.

Every entry point returns in-memory results and optionally writes a CSV.
CSVs start with ``#`` lines echoing the run manifest and format floats with
17 significant digits, so identical inputs give byte-identical files.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, _ode
from ._io import format_float, param_header, write_csv
from .adiabatic import CoolingLimitReport, adiabatic_matrix, report, steady_state_phonon
from .covariance import CoolingResult, diffusion_matrix, simulate_cooling, write_timeseries_csv
from .errors import NumericalError, ParameterError
from .meanfield import integrate_meanfield, meanfield_quadratures
from .params import SystemParams, validate
from .propagator import integrate_means, quadratures

SWEEPABLE = ("kappa2", "J", "E", "E1", "E2", "omega_m")


@dataclass
class RunManifest:
    """Everything that determines a run's output bytes.

    ``params`` holds the resolved parameter set of a single run, or the base
    set of a sweep (the axes are listed in ``settings``).
    """

    command: str
    params: list[SystemParams]
    outputs: list[str] = field(default_factory=list)
    tol: float = _ode.DEFAULT_RTOL
    settings: dict = field(default_factory=dict)
    version: str = __version__

    def header(self) -> list[str]:
        lines = [f"# mimcool {self.version} {self.command}",
                 f"# integrator={_ode.METHOD} rtol={format_float(self.tol)}"]
        lines += [f"# {k}={v}" for k, v in sorted(self.settings.items())]
        for p in self.params:
            lines += param_header(p)[1:]
        return lines


def default_t_max(params: SystemParams) -> float:
    """Settle-time heuristic ``20 / max(Gamma_eff, gamma_m)``.

    ``Gamma_eff = 4 J_E^2 kappa1 / (1 + kappa2/kappa1)`` uses the stronger
    of the two drives. The convergence flag of the result is the real
    guard against a horizon that is too short.
    """
    d = params.derived
    J_E = max(d.J_E1, d.J_E2)
    gamma_eff = 4 * J_E ** 2 * params.kappa1 / (1 + params.kappa2 / params.kappa1)
    return 20 / max(gamma_eff, params.gamma_m)


def summary_line(result: CoolingResult) -> str:
    return (f"n_m_final={format_float(result.n_m_final)} "
            f"cooling_ratio={format_float(result.cooling_ratio)} "
            f"converged={int(result.converged)}")


def run_simulate(params: SystemParams, t_max: float | None = None, dt_out: float | None = None,
                 tol: float = _ode.DEFAULT_RTOL, output: str | Path | None = None) -> CoolingResult:
    """Dynamical cooling run; writes the ``t, n_m, converged_hint`` CSV if asked."""
    params = validate(params)
    if t_max is None:
        t_max = default_t_max(params)
    result = simulate_cooling(params, t_max, dt_out, tol)
    if output is not None:
        manifest = RunManifest("simulate", [params], [str(output)], tol,
                               {"t_max": format_float(t_max)})
        extra = [line[2:] for line in manifest.header()[1:3]]
        write_timeseries_csv(result, output, extra + [summary_line(result)])
    return result


# ---------------------------------------------------------------- sweeps

@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    points: int
    scale: str = "lin"

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[SweepAxis, ...]
    base: SystemParams
    mode: str = "dynamic"
    t_max: float | None = None
    dt_out: float | None = None
    tol: float = _ode.DEFAULT_RTOL

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ParameterError("sweep takes one or two parameters")
        if len({a.name for a in self.axes}) != len(self.axes):
            raise ParameterError("swept parameters must be distinct")
        for a in self.axes:
            if a.name not in SWEEPABLE:
                raise ParameterError(f"cannot sweep {a.name!r}; choose from {SWEEPABLE}")
            if a.points < 1 or (a.points > 1 and a.start == a.stop):
                raise ParameterError(f"degenerate range for {a.name}")
            if a.scale not in ("lin", "log"):
                raise ParameterError(f"scale must be lin or log, got {a.scale!r}")
            if a.scale == "log" and (a.start <= 0 or a.stop <= 0):
                raise ParameterError(f"log range for {a.name} must be positive")
        if self.mode not in ("dynamic", "adiabatic"):
            raise ParameterError(f"mode must be dynamic or adiabatic, got {self.mode!r}")

    def points(self) -> list[tuple[float, ...]]:
        return list(itertools.product(*(a.values() for a in self.axes)))


def apply_point(base: SystemParams, names, values) -> SystemParams:
    """Set swept values on ``base``.

    ``E`` sets both drive amplitudes. Sweeping ``omega_m`` moves any
    detuning that sits on the red sideband of the base along with it.
    """
    changes = {}
    for name, value in zip(names, values):
        value = float(value)
        if name == "E":
            changes["E1"] = changes["E2"] = value
        elif name == "omega_m":
            changes["omega_m"] = value
            for d in ("delta1", "delta2"):
                if getattr(base, d) == base.omega_m:
                    changes[d] = value
        else:
            changes[name] = value
    return validate(base.replace(**changes))


def _sweep_point(args):
    spec, values = args
    names = [a.name for a in spec.axes]
    row = {"values": values, "n_m_final": math.nan, "cooling_ratio": math.nan,
           "converged": False, "error": ""}
    try:
        params = apply_point(spec.base, names, values)
        if spec.mode == "adiabatic":
            n = steady_state_phonon(adiabatic_matrix(params), diffusion_matrix(params))
            row.update(n_m_final=n, converged=True,
                       cooling_ratio=n / (params.derived.Gamma_m * params.n_th))
        else:
            t_max = spec.t_max if spec.t_max is not None else default_t_max(params)
            res = simulate_cooling(params, t_max, spec.dt_out, spec.tol)
            row.update(n_m_final=res.n_m_final, cooling_ratio=res.cooling_ratio,
                       converged=res.converged)
    except (ParameterError, NumericalError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}".replace(",", ";")
    return row


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list[dict]

    @property
    def failed(self) -> int:
        return sum(1 for r in self.rows if r["error"])

    def column(self, key: str) -> np.ndarray:
        return np.array([r[key] for r in self.rows], dtype=float)


def run_sweep(spec: SweepSpec, threads: int = 1, output: str | Path | None = None) -> SweepResult:
    """Evaluate every sweep point; rows come back in sweep order.

    Failing points become NaN rows carrying an error message.
    """
    tasks = [(spec, values) for values in spec.points()]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    result = SweepResult(spec, rows)
    if output is not None:
        names = [a.name for a in spec.axes]
        settings = {"mode": spec.mode}
        for a in spec.axes:
            settings[f"axis_{a.name}"] = (f"{format_float(a.start)}:{format_float(a.stop)}:"
                                          f"{a.points}:{a.scale}")
        if spec.t_max is not None:
            settings["t_max"] = format_float(spec.t_max)
        settings["points"] = len(rows)
        manifest = RunManifest("sweep", [spec.base], [str(output)], spec.tol, settings)
        write_csv(output, manifest.header(),
                  names + ["n_m_final", "cooling_ratio", "converged", "error"],
                  ([*r["values"], r["n_m_final"], r["cooling_ratio"], r["converged"], r["error"]]
                   for r in rows))
    return result


# ---------------------------------------------------------------- compare

@dataclass
class CompareResult:
    t: np.ndarray
    linear: tuple[np.ndarray, np.ndarray, np.ndarray]
    nonlinear: tuple[np.ndarray, np.ndarray, np.ndarray]

    @staticmethod
    def _rel_rms(lin, nl) -> float:
        diff = math.sqrt(float(np.mean((lin - nl) ** 2)))
        ref = math.sqrt(float(np.mean(nl ** 2)))
        if ref == 0:
            return 0.0 if diff == 0 else math.inf
        return diff / ref

    @property
    def rms(self) -> dict[str, float]:
        """Relative RMS discrepancy ``rms(lin - nl) / rms(nl)`` per trace."""
        return {name: self._rel_rms(a, b)
                for name, a, b in zip(("X_c1", "X_c2", "X_m"), self.linear, self.nonlinear)}


def run_compare(params: SystemParams, t_max: float, dt_out: float | None = None,
                tol: float = _ode.DEFAULT_RTOL, output: str | Path | None = None) -> CompareResult:
    """Linearized-frame quadratures against the factorized nonlinear mean field."""
    params = validate(params)
    if dt_out is None:
        step = _ode.max_step(params, bare_drives=True)
        dt_out = step if math.isfinite(step) else t_max / 1000
    lin = quadratures(integrate_means(params, t_max, dt_out, tol), params)
    mf = integrate_meanfield(params, t_max, dt_out, tol)
    result = CompareResult(mf.t, lin, meanfield_quadratures(mf))
    if output is not None:
        manifest = RunManifest("compare", [params], [str(output)], tol,
                               {"t_max": format_float(t_max), "dt_out": format_float(dt_out),
                                "frame": "cavity j rotating at omega_cj; mechanics at omega_m; "
                                         "linear cavity means include E_j(t)"})
        header = manifest.header() + [f"# rms_rel_{k}={format_float(v)}"
                                      for k, v in result.rms.items()]
        cols = ["t", "X_c1_lin", "X_c1_nl", "X_c2_lin", "X_c2_nl", "X_m_lin", "X_m_nl"]
        data = zip(result.t, lin[0], result.nonlinear[0], lin[1], result.nonlinear[1],
                   lin[2], result.nonlinear[2])
        write_csv(output, header, cols, data)
    return result


# ---------------------------------------------------------------- adiabatic limits

def run_adiabatic(case: str, Gamma_m: float, J_E1_values, J_E2_values=None,
                  output: str | Path | None = None) -> list[CoolingLimitReport]:
    """Closed-form limits against Lyapunov solves.

    Cases A and C take the cartesian product of both intensity lists; case B
    takes ``J_E1_values`` only (equal drives).
    """
    case = case.upper()
    if case == "B":
        pairs = [(j, j) for j in J_E1_values]
    else:
        if J_E2_values is None:
            raise ParameterError(f"case {case} needs J_E2 values")
        pairs = list(itertools.product(J_E1_values, J_E2_values))
    reports = [report(case, Gamma_m, float(a), float(b)) for a, b in pairs]
    if output is not None:
        header = [f"# mimcool {__version__} adiabatic case={case}",
                  f"# Gamma_m={format_float(Gamma_m)}"]
        cols = ["J_E1", "J_E2", "kappa2_over_kappa1", "ratio_closed_form", "ratio_lyapunov",
                "rel_gap", "error"]
        write_csv(output, header, cols,
                  ([r.J_E1, r.J_E2, r.kappa2_ratio, r.closed_form, r.lyapunov, r.rel_gap,
                    r.error.replace(",", ";")] for r in reports))
    return reports
