"""Command-line entry point.

Exit status is 0 on success, 1 for invalid input (bad arguments, scenario
validation) and 2 when a numerical procedure fails.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError, NumericError, ScenarioError
from .lab import delay_comparison, run_condition, surface_sweep
from .scenario_io import (
    dumps_report,
    load_scenario,
    run_report,
    write_surface_grid,
    write_trajectory_csv,
)
from .stability import classify, enumerate_equilibria


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt_time(t):
    return "never" if t is None else f"{t:.4g}"


def _cmd_simulate(args, out, err):
    scenario = load_scenario(args.scenario)
    result = run_condition(scenario)
    traj = result.trajectory
    summary = (
        f"{scenario.label}: final state ({traj.final.x:.6g}, {traj.final.y:.6g}, {traj.final.z:.6g}); "
        f"limit {traj.limit}; converged at {_fmt_time(traj.converged_at)}"
    )
    if args.out is None:
        write_trajectory_csv(traj, out)
        print(summary, file=err)
        return 0
    dest = Path(args.out)
    dest.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(traj, dest / "trajectory.csv")
    (dest / "report.json").write_text(
        dumps_report(run_report(scenario, result.classification, traj)), encoding="utf-8"
    )
    print(summary, file=out)
    return 0


def _cmd_classify(args, out, err):
    scenario = load_scenario(args.scenario)
    report = classify(scenario.params)
    if args.json:
        out.write(dumps_report(run_report(scenario, report)))
        return 0
    print(f"{scenario.label}: tau = {report.tau:g}", file=out)
    print(f"{'corner':<8}{'point':<11}{'coefficients':<28}{'signs':<7}{'table':<7}verdict", file=out)
    for e in report.equilibria:
        coeffs = ", ".join(f"{a:g}" for a in e.coeffs)
        print(
            f"{e.name:<8}{str(e.point):<11}{coeffs:<28}{''.join(e.signs):<7}"
            f"{''.join(e.paper_sign_pattern):<7}{e.verdict.value}",
            file=out,
        )
    c = report.conditions
    print(f"condition 1 {c.condition1}, condition 2 {c.condition2}, condition 3 {c.condition3}", file=out)
    return 0


def _cmd_compare(args, out, err):
    scenario = load_scenario(args.scenario)
    if not scenario.tau_list:
        raise ScenarioError("scenario has no tau_list")
    result = delay_comparison(scenario)
    print(f"{'tau':<8}{'limit':<12}{'T(all)':<10}{'T(x)':<10}{'T(y)':<10}T(z)", file=out)
    for row in result.rows:
        tx, ty, tz = (_fmt_time(t) for t in row.player_times)
        print(
            f"{row.tau:<8g}{str(row.limit):<12}{_fmt_time(row.converged_at):<10}{tx:<10}{ty:<10}{tz}",
            file=out,
        )
    print(f"same limit: {result.same_limit}; joint times nondecreasing: {result.times_nondecreasing}", file=out)
    if args.out is not None:
        dest = Path(args.out)
        dest.mkdir(parents=True, exist_ok=True)
        for row in result.rows:
            write_trajectory_csv(row.trajectory, dest / f"trajectory_tau{row.tau:g}.csv")
    return 0


def _cmd_sweep(args, out, err):
    scenario = load_scenario(args.scenario)
    if scenario.sweep is None:
        raise ScenarioError("scenario has no sweep axes (experiment = sweep)")
    surface = surface_sweep(scenario, workers=args.workers)
    dest = Path(args.out)
    dest.mkdir(parents=True, exist_ok=True)
    write_surface_grid(surface, dest / "surface.csv")
    n_fail = int(np.isfinite(surface.failed_at).sum())
    print(
        f"{scenario.label}: {surface.converged.sum()} of {surface.converged.size} cells converged, "
        f"{n_fail} failed; wrote {dest / 'surface.csv'}",
        file=out,
    )
    return 0


def _cmd_equilibria(args, out, err):
    scenario = load_scenario(args.scenario)
    equilibria, interior = enumerate_equilibria(scenario.params)
    for e in equilibria:
        roots = "; ".join(f"{re_:.6g}{im:+.6g}i" for re_, im in e.roots)
        print(f"{e.name} {e.point}  a = {list(e.coeffs)}  rightmost roots: {roots}", file=out)
    detail = f" (x = {interior.x}, y = {interior.y}; {interior.note})" if interior.status != "nonexistent" else ""
    print(f"interior point: {interior.status}{detail}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="delaygame",
        description="Delayed three-party replicator game: simulation and stability analysis.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("simulate", help="integrate one scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", help="directory for trajectory.csv and report.json (default: CSV to stdout)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("classify", help="stability of the eight corners")
    p.add_argument("--scenario", required=True)
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("compare", help="rerun over the scenario's tau_list")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", help="directory for one trajectory CSV per delay")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("sweep", help="two-parameter surface of final states")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("equilibria", help="list fixed points and characteristic roots")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=_cmd_equilibria)
    return parser


def cli_main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_help(err)
        return 1
    try:
        with contextlib.redirect_stdout(out):
            args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=err)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(err)
        return 1
    try:
        return args.func(args, out, err)
    except (ScenarioError, DomainError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    except NumericError as exc:
        print(f"numeric error: {exc}", file=err)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return 1


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
