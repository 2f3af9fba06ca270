"""Command-line front end.

Subcommands: ``solve`` (threshold, success probability, expected search
length, policy summary, optional value tables), ``sweep`` (grids of
instances with scaled values and the analytic asymptote, for plotting),
``asymptotics`` (convergence report), ``simulate`` (Monte Carlo), and
``oracle`` (exact verification of one instance).  All state flows through
flags; identical invocations produce identical bytes.

Exit codes: 0 success, 2 usage or validation error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .asymptotics import convergence_report, limit_constant
from .equilibrium import (
    GameConfig,
    build_policy,
    closed_form_success,
    expected_stopping_time,
    solve_values,
)
from .oracle import (
    PolicySpec,
    VerificationError,
    exact_expected_tau,
    exact_success_probability,
    full_learning_audit,
    optimality_scan,
)
from .simulator import StrategyProfile, estimate

__all__ = ["RunSpec", "run", "main"]

_USAGE_ERROR = 2
_VERIFICATION_ERROR = 3


@dataclass(frozen=True)
class RunSpec:
    """One fully-specified invocation of the tool."""

    command: str
    n: Optional[int] = None
    cost: Optional[float] = None
    n_range: tuple[int, ...] = ()
    cost_list: tuple[float, ...] = ()
    trials: int = 0
    seed: int = 0
    workers: int = 1
    grid_step: Optional[float] = None
    tolerance: Optional[float] = None
    tables: bool = False
    output_format: str = "csv"
    output_path: Optional[str] = None


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


def _emit(rows: list[dict], meta: dict, spec: RunSpec) -> None:
    if spec.output_format == "json":
        payload = {"meta": meta, "rows": rows}
        text = json.dumps(payload, indent=2, allow_nan=False, default=_fmt) + "\n"
    else:
        lines = []
        if rows:
            header = list(rows[0].keys())
            lines.append(",".join(header))
            for row in rows:
                lines.append(",".join(_fmt(row[k]) for k in header))
        text = "\n".join(lines) + "\n"
    if spec.output_path:
        with open(spec.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(spec: RunSpec, **extra) -> dict:
    meta = {"tool": "costly-secretary", "version": __version__, "command": spec.command}
    meta.update(extra)
    return meta


def _run_solve(spec: RunSpec) -> int:
    config = GameConfig(spec.n, spec.cost)
    tables = solve_values(config)
    policy = build_policy(config, tables)
    if spec.tables:
        rows = [
            {
                "stage": n,
                "v0": float(tables.v0[n]),
                "v1": float(tables.v1[n]),
                "accept_record": float(policy.accept_record[n]),
            }
            for n in range(1, config.n_applicants + 1)
        ]
    else:
        rows = [
            {
                "n": config.n_applicants,
                "cost": config.cost,
                "n_star": tables.threshold,
                "pi": tables.success_probability,
                "expected_tau": expected_stopping_time(config),
                "accept_record_before_threshold": config.cost,
                "accept_record_from_threshold": 1.0,
                "accept_nonrecord": policy.accept_nonrecord,
            }
        ]
    _emit(rows, _meta(spec), spec)
    return 0


def _run_sweep(spec: RunSpec) -> int:
    rows = []
    for cost in spec.cost_list:
        asymptote_scale = limit_constant(cost)
        for n_apps in spec.n_range:
            config = GameConfig(n_apps, cost)
            tables = solve_values(config)
            pi = tables.success_probability
            rows.append(
                {
                    "n": n_apps,
                    "cost": cost,
                    "n_star": tables.threshold,
                    "pi": pi,
                    "scaled_pi": n_apps**cost * pi,
                    "asymptote": asymptote_scale * n_apps ** (-cost),
                    "expected_tau": expected_stopping_time(config),
                }
            )
    _emit(rows, _meta(spec), spec)
    return 0


def _run_asymptotics(spec: RunSpec) -> int:
    tolerance = spec.tolerance if spec.tolerance is not None else 0.05
    report = convergence_report(spec.cost, spec.n_range, tolerance=tolerance)
    rows = []
    for (n_apps, scaled), (_, n_star, lower, upper) in zip(
        report.samples, report.threshold_samples
    ):
        rows.append(
            {
                "n": n_apps,
                "n_star": n_star,
                "threshold_lower": lower,
                "threshold_upper": upper,
                "scaled_pi": scaled,
                "limit_constant": report.limit_constant,
                "relative_deviation": abs(scaled - report.limit_constant)
                / report.limit_constant,
            }
        )
    meta = _meta(
        spec,
        cost=report.cost,
        limit_constant=report.limit_constant,
        tolerance=report.tolerance,
        note=report.note,
    )
    _emit(rows, meta, spec)
    violations = report.violations()
    if violations:
        for v in violations:
            print(f"asymptotics check failed: {v}", file=sys.stderr)
        return _VERIFICATION_ERROR
    print(report.note, file=sys.stderr)
    return 0


def _run_simulate(spec: RunSpec) -> int:
    config = GameConfig(spec.n, spec.cost)
    profile = StrategyProfile.equilibrium(config)
    stats = estimate(config, profile, spec.trials, spec.seed, workers=spec.workers)
    mean_tau_cond = stats.mean_tau_conditional
    rows = [
        {
            "n": config.n_applicants,
            "cost": config.cost,
            "trials": stats.trials,
            "seed": stats.seed,
            "success_rate": stats.success_rate,
            "success_se": stats.success_se,
            "acceptance_rate": stats.acceptance_rate,
            "mean_tau_unconditional": stats.mean_tau_unconditional,
            "mean_tau_conditional": None if math.isnan(mean_tau_cond) else mean_tau_cond,
            "tau_se": stats.tau_se,
        }
    ]
    _emit(rows, _meta(spec, seed=spec.seed), spec)
    return 0


def _run_oracle(spec: RunSpec) -> int:
    config = GameConfig(spec.n, spec.cost)
    tolerance = spec.tolerance if spec.tolerance is not None else 1e-12
    tables = solve_values(config)
    dp = tables.success_probability
    closed = closed_form_success(config)
    tau_closed = expected_stopping_time(config)
    policy = PolicySpec.equilibrium(config)
    enum_pi = float(exact_success_probability(config, policy))
    enum_tau = float(exact_expected_tau(config, policy))
    audit_ok = full_learning_audit(config)

    def check(name, a, b, tol=tolerance):
        diff = abs(a - b)
        return {
            "check": name,
            "value_a": a,
            "value_b": b,
            "difference": diff,
            "tolerance": tol,
            "status": "ok" if diff <= tol else "fail",
        }

    rows = [
        check("closed_form_vs_dp", closed, dp),
        check("enumeration_vs_dp", enum_pi, dp),
        check("expected_tau_vs_n_pi", tau_closed, config.n_applicants * closed),
        check("enumeration_tau_vs_n_pi", enum_tau, config.n_applicants * enum_pi),
        {
            "check": "full_learning_audit",
            "value_a": 1.0 if audit_ok else 0.0,
            "value_b": 1.0,
            "difference": 0.0 if audit_ok else 1.0,
            "tolerance": 0.0,
            "status": "ok" if audit_ok else "fail",
        },
    ]
    scan_failed = False
    if spec.grid_step is not None:
        try:
            report = optimality_scan(config, spec.grid_step)
            rows.append(
                check("scan_max_vs_dp", report.max_success, report.dp_success)
            )
        except VerificationError as exc:
            print(f"optimality scan failed: {exc}", file=sys.stderr)
            scan_failed = True
    _emit(rows, _meta(spec, tolerance=tolerance), spec)
    failed = scan_failed or any(r["status"] == "fail" for r in rows)
    if failed:
        for r in rows:
            if r["status"] == "fail":
                print(f"verification failed: {r['check']}", file=sys.stderr)
        return _VERIFICATION_ERROR
    return 0


_DISPATCH = {
    "solve": _run_solve,
    "sweep": _run_sweep,
    "asymptotics": _run_asymptotics,
    "simulate": _run_simulate,
    "oracle": _run_oracle,
}


def run(spec: RunSpec) -> int:
    """Execute a fully-parsed invocation; returns the process exit code."""
    try:
        return _DISPATCH[spec.command](spec)
    except KeyError:
        print(f"unknown command {spec.command!r}", file=sys.stderr)
        return _USAGE_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_ERROR
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return _VERIFICATION_ERROR


def _parse_n_range(text: str, log_spaced: bool) -> tuple[int, ...]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"range must look like A:B or A:B:STEP, got {text!r}")
    lo, hi = int(parts[0]), int(parts[1])
    if lo < 2 or hi < lo:
        raise ValueError(f"range must satisfy 2 <= A <= B, got {text!r}")
    if log_spaced:
        count = int(parts[2]) if len(parts) == 3 else 20
        if count < 2:
            raise ValueError("log-spaced range needs a count of at least 2")
        values = np.geomspace(lo, hi, count)
        out = sorted({int(round(v)) for v in values})
        return tuple(out)
    step = int(parts[2]) if len(parts) == 3 else 1
    if step < 1:
        raise ValueError("range step must be a positive integer")
    return tuple(range(lo, hi + 1, step))


def _parse_cost_list(text: str) -> tuple[float, ...]:
    costs = tuple(float(tok) for tok in text.split(",") if tok.strip() != "")
    if not costs:
        raise ValueError("cost list is empty")
    return costs


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="costly-secretary",
        description=(
            "Solve, sweep, simulate, and verify the secretary problem with "
            "applicant-borne interview costs."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cost", type=float, required=True)
    p.add_argument("--tables", action="store_true", help="emit per-stage values")
    add_io(p)

    p = sub.add_parser("sweep", help="solve a grid of instances")
    p.add_argument("--n-range", required=True, help="A:B, A:B:STEP, or A:B:COUNT with --log-spaced")
    p.add_argument("--cost-list", required=True, help="comma-separated costs")
    p.add_argument("--log-spaced", action="store_true")
    add_io(p)

    p = sub.add_parser("asymptotics", help="convergence report for one cost")
    p.add_argument("--cost", type=float, required=True)
    p.add_argument("--n-range", required=True)
    p.add_argument("--log-spaced", action="store_true")
    p.add_argument("--tolerance", type=float, default=None)
    add_io(p)

    p = sub.add_parser("simulate", help="Monte Carlo under the solved profile")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cost", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    add_io(p)

    p = sub.add_parser("oracle", help="exact verification of one instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cost", type=float, required=True)
    p.add_argument("--grid-step", type=float, default=None, help="also run the policy scan")
    p.add_argument("--tolerance", type=float, default=None)
    add_io(p)

    return parser


def _spec_from_args(args: argparse.Namespace) -> RunSpec:
    n_range: tuple[int, ...] = ()
    if getattr(args, "n_range", None):
        n_range = _parse_n_range(args.n_range, getattr(args, "log_spaced", False))
    cost_list: tuple[float, ...] = ()
    if getattr(args, "cost_list", None):
        cost_list = _parse_cost_list(args.cost_list)
    return RunSpec(
        command=args.command,
        n=getattr(args, "n", None),
        cost=getattr(args, "cost", None),
        n_range=n_range,
        cost_list=cost_list,
        trials=getattr(args, "trials", 0),
        seed=getattr(args, "seed", 0),
        workers=getattr(args, "workers", 1),
        grid_step=getattr(args, "grid_step", None),
        tolerance=getattr(args, "tolerance", None),
        tables=getattr(args, "tables", False),
        output_format=args.format,
        output_path=args.out,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else _USAGE_ERROR
    try:
        spec = _spec_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_ERROR
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
