"""Command-line front end.

Subcommands: solve, verify, table1, sweep-p1.  Exit codes: 0 success,
1 solver failure, 2 input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from . import io, pmp, svg
from .model import ProblemKind, Scenario, ScenarioError
from .optimize import MultistartError, Solution, SolveOptions, multistart
from .pmp import Tolerances
from .transcribe import Scheme, simulate

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_INPUT = 2


@dataclasses.dataclass(frozen=True)
class RunManifest:
    scenario: Scenario
    scheme: Scheme
    options: SolveOptions
    out_dir: Path
    tolerances: Tolerances


def _read_manifest(args) -> RunManifest:
    text = Path(args.scenario).read_text(encoding="utf-8")
    scn = io.parse_scenario(text)
    scheme = Scheme(args.scheme) if args.scheme else io.parse_scheme(text)
    if args.n_grid:
        scn = dataclasses.replace(scn, n_grid=args.n_grid)
    opts = SolveOptions(seed=args.seed) if args.seed is not None else SolveOptions()
    tols = (Tolerances(eps_singular=args.eps_singular)
            if args.eps_singular is not None else Tolerances())
    return RunManifest(scenario=scn, scheme=scheme, options=opts,
                       out_dir=Path(args.out), tolerances=tols)


def _write_branch(branch_dir: Path, sol: Solution, scn: Scenario,
                  scheme: Scheme, tols: Tolerances) -> bool:
    branch_dir.mkdir(parents=True, exist_ok=True)
    traj = sol.trajectory
    io.write_trajectory_csv(branch_dir / "trajectory.csv", traj, sol.control, scn)
    ct = pmp.integrate_costates(traj, scn, scheme, u=sol.control)
    io.write_costates_csv(branch_dir / "costates.csv", ct.times, ct.lx,
                          ct.ly, ct.ltheta, ct.ltheta_dot)
    report = pmp.verify(sol, scn, scheme, tols)
    (branch_dir / "path.svg").write_text(
        svg.path_plot([(sol.start_label or "path",
                        traj.states[:, 0], traj.states[:, 1])]),
        encoding="utf-8")
    (branch_dir / "course.svg").write_text(
        svg.series_plot(traj.times, [("theta [rad]", traj.states[:, 2])],
                        "course theta(t)"), encoding="utf-8")
    (branch_dir / "switching.svg").write_text(
        svg.series_plot(ct.times, [("lambda_theta", ct.ltheta)],
                        "switching function"), encoding="utf-8")
    summary = [
        f"objective_sigma4_detF = {sol.objective_reported:.4g}",
        f"arc_structure = {report.arc_structure.label}",
        f"converged = {sol.converged}",
        f"iterations = {sol.iterations}",
        f"start = {sol.start_label}",
        f"verification_passed = {report.passed}",
        f"transversality_residual = {report.transversality_residual:.4g}",
        f"fact1_residual = {report.fact1_residual:.4g}",
        f"bang_sign_violations = {report.bang_sign_violations}",
        f"singular_theta_max_err = {report.singular_theta_max_err:.4g}",
        f"hamiltonian_drift = {report.hamiltonian_drift:.4g}",
    ]
    (branch_dir / "summary.txt").write_text("\n".join(summary) + "\n",
                                            encoding="utf-8")
    return report.passed


def cmd_solve(args) -> int:
    try:
        manifest = _read_manifest(args)
    except (OSError, io.ParseError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    scn, scheme = manifest.scenario, manifest.scheme
    try:
        sols = multistart(scn, manifest.options, scheme)
    except MultistartError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    manifest.out_dir.mkdir(parents=True, exist_ok=True)
    for i, sol in enumerate(sols):
        _write_branch(manifest.out_dir / f"branch{i:02d}", sol, scn,
                      scheme, manifest.tolerances)
    (manifest.out_dir / "path.svg").write_text(
        svg.path_plot([
            (f"branch{i:02d}", s.trajectory.states[:, 0],
             s.trajectory.states[:, 1]) for i, s in enumerate(sols)
        ]), encoding="utf-8")
    for i, sol in enumerate(sols):
        print(f"branch{i:02d}: sigma^4 detF = {sol.objective_reported:.4g} "
              f"({sol.start_label})")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        text = Path(args.scenario).read_text(encoding="utf-8")
        scn = io.parse_scenario(text)
        scheme = Scheme(args.scheme) if args.scheme else io.parse_scheme(text)
        data = io.read_trajectory_csv(args.trajectory)
    except (OSError, io.ParseError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    n = data.shape[0] - 1
    if n != scn.n_grid:
        scn = dataclasses.replace(scn, n_grid=n)
    if scn.kind is ProblemKind.P3:
        u = data[:n, 4].copy()
    else:
        u = data[:n, 3].copy()
    traj = simulate(scn, u, scheme)
    stored_obj = data[n, 5] * data[n, 6] - data[n, 7] ** 2
    rel = abs(traj.fim.det - stored_obj) / max(abs(stored_obj), 1e-300)
    if rel > 1e-12:
        print(f"error: stored objective mismatch (relative {rel:.3e}); "
              "trajectory does not round-trip", file=sys.stderr)
        return EXIT_INPUT
    tols = (Tolerances(eps_singular=args.eps_singular)
            if args.eps_singular is not None else Tolerances())
    sol = Solution(control=u, trajectory=traj,
                   objective_reported=traj.fim.det, iterations=0,
                   converged=True, start_label="from-file")
    report = pmp.verify(sol, scn, scheme, tols)
    print(f"objective_sigma4_detF = {traj.fim.det:.4g}")
    print(f"arc_structure = {report.arc_structure.label}")
    print(f"transversality_residual = {report.transversality_residual:.4g}")
    print(f"fact1_residual = {report.fact1_residual:.4g}")
    print(f"bang_sign_violations = {report.bang_sign_violations}")
    print(f"singular_theta_max_err = {report.singular_theta_max_err:.4g}")
    print(f"hamiltonian_drift = {report.hamiltonian_drift:.4g}")
    print(f"passed = {report.passed}")
    return EXIT_OK if report.passed else EXIT_SOLVER


def _distinct_locals(sols: list[Solution], rtol: float = 1e-3) -> list[Solution]:
    """Branches whose objective differs from the best by more than rtol
    (mirror pairs share the objective and are not 'local' branches)."""
    if not sols:
        return []
    best = sols[0].objective_reported
    return [s for s in sols
            if abs(s.objective_reported - best) > rtol * abs(best)]


def cmd_table1(args) -> int:
    try:
        manifest = _read_manifest(args)
    except (OSError, io.ParseError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not args.t_f:
        print("error: need at least one t_f value", file=sys.stderr)
        return EXIT_INPUT
    scn0, scheme = manifest.scenario, manifest.scheme
    rows = []
    failed = False
    for tf in args.t_f:
        if tf <= 0:
            print("error: t_f values must be positive", file=sys.stderr)
            return EXIT_INPUT
        scn = dataclasses.replace(scn0, t_f=float(tf))
        try:
            sols = multistart(scn, manifest.options, scheme)
        except MultistartError:
            rows.append((tf, None, None))
            failed = True
            continue
        best = sols[0].objective_reported
        locals_ = _distinct_locals(sols)
        rows.append((tf, best, locals_[0].objective_reported if locals_ else None))
    print(f"{'t_f':>6}  {'global':>10}  {'local':>10}")
    for tf, g, l in rows:
        gtxt = f"{g:.4g}" if g is not None else "FAILED"
        ltxt = f"{l:.4g}" if l is not None else ""
        print(f"{tf:>6g}  {gtxt:>10}  {ltxt:>10}")
    return EXIT_SOLVER if failed else EXIT_OK


def cmd_sweep_p1(args) -> int:
    try:
        manifest = _read_manifest(args)
    except (OSError, io.ParseError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not args.K:
        print("error: need at least one K value", file=sys.stderr)
        return EXIT_INPUT
    if any(k <= 0 for k in args.K):
        print("error: K values must be positive", file=sys.stderr)
        return EXIT_INPUT
    scn0 = manifest.scenario
    if scn0.kind is not ProblemKind.P1:
        scn0 = dataclasses.replace(scn0, kind=ProblemKind.P1)
    failed = False
    for K in args.K:
        t_f = K * scn0.r0 / scn0.v
        scn = dataclasses.replace(scn0, t_f=t_f)
        try:
            sols = multistart(scn, manifest.options, manifest.scheme)
        except MultistartError:
            print(f"K={K}: FAILED")
            failed = True
            continue
        sol = sols[0]
        out = manifest.out_dir / f"K{K:g}"
        _write_branch(out, sol, scn, manifest.scheme, manifest.tolerances)
        theta0 = math.degrees(sol.control[0])
        print(f"K={K:g}: t_f={t_f:g} s, sigma^4 detF = "
              f"{sol.objective_reported:.4g}, theta(0) = {theta0:.1f} deg")
    return EXIT_SOLVER if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="obspath",
        description="Observer path planning for maximum Fisher information",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("scenario", help="scenario file (key = value lines)")
        sp.add_argument("--scheme", choices=["euler", "heun"], default=None)
        sp.add_argument("--n-grid", type=int, default=None)
        sp.add_argument("--out", default="out")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--eps-singular", type=float, default=None)

    sp = sub.add_parser("solve", help="multistart solve, write all branches")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="re-verify a solved trajectory CSV")
    sp.add_argument("scenario")
    sp.add_argument("trajectory", help="trajectory.csv written by solve")
    sp.add_argument("--scheme", choices=["euler", "heun"], default=None)
    sp.add_argument("--eps-singular", type=float, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("table1", help="objective sweep over horizons")
    common(sp)
    sp.add_argument("--t-f", type=float, nargs="*",
                    default=[50, 80, 100, 120, 140, 150, 155, 160])
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("sweep-p1", help="P1 sweep over K = v*t_f/r0")
    common(sp)
    sp.add_argument("--K", type=float, nargs="*",
                    default=[0.1, 0.2, 0.4, 0.6, 0.8, 0.9, 0.95])
    sp.set_defaults(func=cmd_sweep_p1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
