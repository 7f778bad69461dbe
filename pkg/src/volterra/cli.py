"""Command-line interface.

Exit codes: 0 for certified / converged runs, 1 when a check is not
certified or a solver fails to converge, 2 for configuration errors.
Reports are single JSON objects with hypothesis / solve / sensitivity
sections plus metadata; apart from the timestamp, identical configs and
seeds produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .certification import check_A3, check_A4, check_example1, check_example2
from .config import ProblemConfig
from .errors import ConfigError, SolverError, VolterraError
from .function_space import ac_norm, from_callable, sub, write_csv
from .linear_solver import apply_T, collocation_solve
from .nonlinear_solver import solve_newton
from .operator import apply_V
from .sensitivity import fd_sensitivity_check

_FD_EPSILON = 1e-3


def _meta(config: ProblemConfig) -> dict:
    return {
        "grid": {"alpha": config.alpha, "beta": config.beta, "n_cells": config.n_cells},
        "seed": config.seed,
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def _write_report(report: dict, path, echo: bool) -> None:
    text = json.dumps(report, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    if echo:
        print(text)


def _run_checks(kernel, grid) -> dict:
    """Run every check the kernel's declared bounds support."""
    section: dict = {"A3": None, "A4": None, "certified": False}
    b = kernel.bounds
    if b is not None and b.c0 is not None and b.d0 is not None:
        section["A3"] = check_A3(kernel, grid).to_dict()
    if b is not None and all(f is not None for f in (b.c1, b.d1, b.c2, b.d2)):
        section["A4"] = check_A4(kernel, grid).to_dict()
    section["certified"] = any(
        rep is not None and rep["passed"] for rep in (section["A3"], section["A4"])
    )
    return section


def cmd_check(args) -> int:
    config = ProblemConfig.from_file(args.config)
    grid = config.build_grid()
    kernel = config.build_kernel()
    hyp = _run_checks(kernel, grid)
    report = {"hypothesis": hyp, "solve": None, "sensitivity": None, "meta": _meta(config)}
    _write_report(report, args.report, echo=args.report is None)
    if hyp["certified"]:
        print(f"certified: kernel {kernel.name} on [{grid.alpha}, {grid.beta}]",
              file=sys.stderr)
        return 0
    print(f"not certified: kernel {kernel.name} on [{grid.alpha}, {grid.beta}]",
          file=sys.stderr)
    return 1


def _solve_section(kernel, grid, config, y):
    x, rep = solve_newton(kernel, y, tol=config.tol, max_iter=config.max_iter)
    section = rep.to_dict()
    section["final_residual"] = ac_norm(sub(apply_V(kernel, x), y))
    return x, section


def cmd_solve(args) -> int:
    config = ProblemConfig.from_file(args.config)
    grid = config.build_grid()
    kernel = config.build_kernel()
    y = config.build_rhs(grid)
    hyp = _run_checks(kernel, grid)
    if not hyp["certified"]:
        print("warning: hypotheses not certified; solving anyway", file=sys.stderr)
    report = {"hypothesis": hyp, "solve": None, "sensitivity": None, "meta": _meta(config)}
    try:
        x, section = _solve_section(kernel, grid, config, y)
    except SolverError as exc:
        report["solve"] = exc.report.to_dict() if exc.report is not None else {"error": str(exc)}
        _write_report(report, args.report, echo=args.report is None)
        print(f"solve failed: {exc}", file=sys.stderr)
        return 1
    report["solve"] = section
    write_csv(x, args.output)
    _write_report(report, args.report, echo=args.report is None)
    print(f"solution written to {args.output}", file=sys.stderr)
    return 0


def cmd_sensitivity(args) -> int:
    from .config import _resample_csv

    config = ProblemConfig.from_file(args.config)
    grid = config.build_grid()
    kernel = config.build_kernel()
    y = config.build_rhs(grid)
    h = _resample_csv(args.direction, grid)
    report = {"hypothesis": None, "solve": None, "sensitivity": None, "meta": _meta(config)}
    try:
        x, solve_section = _solve_section(kernel, grid, config, y)
        s = collocation_solve(kernel, x, h)
        resid = ac_norm(sub(s + apply_T(kernel, x, s), h))
        fd_gap = fd_sensitivity_check(kernel, y, h, epsilon=_FD_EPSILON,
                                      tol=min(config.tol, 1e-11),
                                      max_iter=config.max_iter)
    except SolverError as exc:
        report["sensitivity"] = {"error": str(exc)}
        _write_report(report, args.report, echo=args.report is None)
        print(f"sensitivity failed: {exc}", file=sys.stderr)
        return 1
    report["solve"] = solve_section
    report["sensitivity"] = {
        "residual": resid,
        "fd_epsilon": _FD_EPSILON,
        "fd_discrepancy": fd_gap,
    }
    write_csv(s, args.output)
    _write_report(report, args.report, echo=args.report is None)
    print(f"sensitivity written to {args.output}", file=sys.stderr)
    return 0


_DEMOS = {
    "example1": {
        "kernel": {"name": "example1", "params": {"a_bar": 1.0}},
        "interval": [0.0, 1.0],
        "n_cells": 500,
        "rhs": {"expression": "t"},
        "tol": 1e-10,
        "max_iter": 50,
        "seed": 0,
    },
    "example2": {
        "kernel": {"name": "example2_linw_atan", "params": {"A": 1.0, "B": 0.0}},
        "interval": [0.0, 0.9],
        "n_cells": 500,
        "rhs": {"expression": "t"},
        "tol": 1e-10,
        "max_iter": 50,
        "seed": 0,
    },
}


def cmd_demo(args) -> int:
    if args.name not in _DEMOS:
        print(f"unknown demo {args.name!r}; choose from {sorted(_DEMOS)}", file=sys.stderr)
        return 2
    config = ProblemConfig.from_dict(_DEMOS[args.name])
    out_dir = Path(args.out_dir) / args.name
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(json.dumps(config.to_dict(), indent=2) + "\n")

    grid = config.build_grid()
    kernel = config.build_kernel()
    y = config.build_rhs(grid)
    h = from_callable(lambda t: t - grid.alpha, grid)
    report = {"hypothesis": None, "solve": None, "sensitivity": None, "meta": _meta(config)}

    hyp = _run_checks(kernel, grid)
    # The canonical examples also admit closed-form admissibility checks;
    # record them next to the quadrature-based ones.
    if args.name == "example1":
        hyp["closed_form"] = check_example1(config.kernel_params["a_bar"]).to_dict()
    else:
        hyp["closed_form"] = check_example2(lambda s: np.ones_like(s),
                                            A=config.kernel_params["A"],
                                            T=grid.beta, grid=grid).to_dict()
    report["hypothesis"] = hyp
    ok = hyp["certified"] and hyp["closed_form"]["passed"]
    print(f"[demo {args.name}] check: {'certified' if ok else 'NOT certified'}",
          file=sys.stderr)

    if ok:
        try:
            x, solve_section = _solve_section(kernel, grid, config, y)
            report["solve"] = solve_section
            write_csv(x, out_dir / "solution.csv")
            print(f"[demo {args.name}] solve: {solve_section['iterations']} iterations, "
                  f"residual {solve_section['final_residual']:.3e}", file=sys.stderr)

            s = collocation_solve(kernel, x, h)
            resid = ac_norm(sub(s + apply_T(kernel, x, s), h))
            fd_gap = fd_sensitivity_check(kernel, y, h, epsilon=_FD_EPSILON, tol=1e-11,
                                          max_iter=config.max_iter)
            report["sensitivity"] = {
                "residual": resid,
                "fd_epsilon": _FD_EPSILON,
                "fd_discrepancy": fd_gap,
            }
            write_csv(s, out_dir / "sensitivity.csv")
            print(f"[demo {args.name}] sensitivity: fd discrepancy {fd_gap:.3e}",
                  file=sys.stderr)
        except SolverError as exc:
            report["solve"] = report["solve"] or {"error": str(exc)}
            ok = False
            print(f"[demo {args.name}] solver failed: {exc}", file=sys.stderr)

    _write_report(report, out_dir / "report.json", echo=False)
    print(f"[demo {args.name}] artifacts in {out_dir}", file=sys.stderr)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="volterra",
        description="Second-kind Volterra equations: certification, solving, sensitivity.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("check", help="certify well-posedness hypotheses")
    p.add_argument("config")
    p.add_argument("--report", default=None, help="write the JSON report here instead of stdout")
    p.set_defaults(fn=cmd_check)

    p = subs.add_parser("solve", help="solve V(x) = rhs")
    p.add_argument("config")
    p.add_argument("-o", "--output", required=True, help="solution CSV path")
    p.add_argument("--report", default=None)
    p.set_defaults(fn=cmd_solve)

    p = subs.add_parser("sensitivity", help="directional sensitivity of the solution map")
    p.add_argument("config")
    p.add_argument("--direction", required=True, help="direction CSV path")
    p.add_argument("-o", "--output", required=True, help="sensitivity CSV path")
    p.add_argument("--report", default=None)
    p.set_defaults(fn=cmd_sensitivity)

    p = subs.add_parser("demo", help="run a canonical end-to-end example")
    p.add_argument("name", help="example1 or example2")
    p.add_argument("--out-dir", default="demo_out")
    p.set_defaults(fn=cmd_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except VolterraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
