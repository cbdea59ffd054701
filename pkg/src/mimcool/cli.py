"""Command line entry point: ``mimcool {simulate,sweep,compare,adiabatic}``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 sweep finished with some failed (NaN) rows.
"""
from __future__ import annotations

import argparse
import sys


from . import _ode
from .errors import NumericalError, ParameterError
from .harness import (SWEEPABLE, SweepAxis, SweepSpec, run_adiabatic, run_compare, run_simulate,
                      run_sweep, summary_line)
from .params import SystemParams, load_config, validate

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_PARTIAL = 0, 2, 3, 4


def _load(args) -> SystemParams:
    if args.config is None:
        return validate(SystemParams())
    return load_config(args.config)


def _axes(args, allowed) -> list[SweepAxis]:
    names = args.param or []
    n = len(names)
    if not n:
        raise ParameterError("at least one --param is required")
    lists = {"--from": args.start, "--to": args.stop, "--points": args.points}
    for flag, values in lists.items():
        if values is None or len(values) != n:
            raise ParameterError(f"give one {flag} per --param")
    scales = args.scale or ["lin"] * n
    if len(scales) == 1 and n > 1:
        scales = scales * n
    if len(scales) != n:
        raise ParameterError("give one --scale per --param (or a single one)")
    for name in names:
        if name not in allowed:
            raise ParameterError(f"--param must be one of {allowed}, got {name!r}")
    return [SweepAxis(*a) for a in zip(names, args.start, args.stop, args.points, scales)]


def _common(p, t_max_default=None):
    p.add_argument("--config", help="key=value parameter file")
    p.add_argument("--t-max", type=float, default=t_max_default)
    p.add_argument("--dt-out", type=float)
    p.add_argument("--tol", type=float, default=_ode.DEFAULT_RTOL)
    p.add_argument("--output", default="-", help="CSV path (default: stdout)")


def _axis_flags(p):
    p.add_argument("--param", action="append")
    p.add_argument("--from", dest="start", type=float, action="append")
    p.add_argument("--to", dest="stop", type=float, action="append")
    p.add_argument("--points", type=int, action="append")
    p.add_argument("--scale", choices=("lin", "log"), action="append")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mimcool", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="dynamical cooling run")
    _common(p)

    p = sub.add_parser("sweep", help="cooling ratio over one or two parameters")
    _common(p)
    _axis_flags(p)
    p.add_argument("--mode", choices=("dynamic", "adiabatic"), default="dynamic")
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("compare", help="linearized vs nonlinear mean-field quadratures")
    _common(p, t_max_default=20.0)

    p = sub.add_parser("adiabatic", help="closed-form cooling limits vs Lyapunov solves")
    p.add_argument("--config", help="parameter file; only gamma_m/kappa1 is used")
    p.add_argument("--case", choices=("A", "B", "C"), required=True)
    p.add_argument("--output", default="-")
    _axis_flags(p)
    return parser


def _run(args) -> int:
    if args.command == "simulate":
        result = run_simulate(_load(args), args.t_max, args.dt_out, args.tol, args.output)
        print(summary_line(result), file=sys.stderr)
        return EXIT_OK

    if args.command == "sweep":
        spec = SweepSpec(tuple(_axes(args, SWEEPABLE)), _load(args), args.mode,
                         args.t_max, args.dt_out, args.tol)
        result = run_sweep(spec, args.threads, args.output)
        if result.failed:
            print(f"{result.failed} of {len(result.rows)} points failed", file=sys.stderr)
            return EXIT_PARTIAL
        return EXIT_OK

    if args.command == "compare":
        result = run_compare(_load(args), args.t_max, args.dt_out, args.tol, args.output)
        print(" ".join(f"rms_rel_{k}={v:.6g}" for k, v in result.rms.items()), file=sys.stderr)
        return EXIT_OK

    if args.command == "adiabatic":
        params = _load(args)
        allowed = ("J_E",) if args.case == "B" else ("J_E1", "J_E2")
        axes = {a.name: a.values() for a in _axes(args, allowed)}
        if args.case == "B":
            first, second = axes["J_E"], None
        else:
            if set(axes) != {"J_E1", "J_E2"}:
                raise ParameterError(f"case {args.case} needs --param J_E1 and --param J_E2")
            first, second = axes["J_E1"], axes["J_E2"]
        reports = run_adiabatic(args.case, params.derived.Gamma_m, first, second, args.output)
        bad = sum(1 for r in reports if r.error)
        return EXIT_PARTIAL if bad else EXIT_OK
    raise AssertionError(args.command)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
