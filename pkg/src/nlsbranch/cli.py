"""Batch command-line interface.

Subcommands: ``solve`` (single stationary state), ``continue`` (branch
sweep with monotonicity summary), ``masscurve`` (constrained-minimizer
sweep with kink report), ``verify`` (recompute identity diagnostics on a
stored artifact).  Exit codes: 0 success, 2 validation error, 3
nonconvergence / truncated sweep, 4 identity failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .artifacts import ArtifactError, load_artifact, write_branch, write_masscurve, write_solution
from .config import ExperimentConfig
from .diagnostics import identity_suite
from .massmin import MinimizerResult, mass_curve, minimize_on_sphere
from .problems import operator
from .solve import (
    DegeneratePointError,
    NehariError,
    Solution,
    StepControl,
    branch_tangent,
    continue_branch,
    solve_from_bump,
)
from .spectrum import morse_index

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NONCONVERGENCE = 3
EXIT_IDENTITY = 4


def _print_identity_table(rows):
    print(f"{'identity':>18} {'lhs':>14} {'rhs':>14} {'rel_resid':>11} {'tol':>9} verdict")
    ok = True
    for r in rows:
        verdict = "inconclusive" if r.passed is None else ("pass" if r.passed else "FAIL")
        if r.passed is False:
            ok = False
        print(f"{r.identity_id:>18} {r.lhs:>14.6e} {r.rhs:>14.6e} {r.rel_residual:>11.3e} {r.tol:>9.1e} {verdict}")
    return ok


def cmd_solve(config: ExperimentConfig) -> int:
    """Single (problem, lambda) solve; writes JSON + profile CSV + spectrum."""
    try:
        problem = config.validate()
        if config.lam is None:
            raise ValueError("solve needs --lambda")
        grid = config.grid(problem)
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        sol = solve_from_bump(problem, grid, config.lam, tol=config.newton_tol)
    except (DegeneratePointError, NehariError, ValueError) as exc:
        print(f"solve failed: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    spec_rep = morse_index(problem, grid, sol) if sol.converged else None
    reps = []
    if config.verify and sol.converged:
        v = None
        try:
            v = branch_tangent(problem, grid, sol)
        except Exception:
            pass
        reps = identity_suite(problem, grid, sol, v)
    tag = config.tag or "solution"
    path = write_solution(config, grid, sol, spec_rep, reps, tag=tag)
    print(f"lambda={sol.lam:g} mass={sol.mass:.8g} energy={sol.energy:.8g} "
          f"residual={sol.residual_norm:.3e} converged={sol.converged}")
    if spec_rep is not None:
        print(f"morse_index={spec_rep.morse_index} nondegenerate={spec_rep.nondegenerate}")
    if reps:
        if not _print_identity_table(reps):
            return EXIT_IDENTITY
    print(f"wrote {path}")
    return EXIT_OK if sol.converged else EXIT_NONCONVERGENCE


def cmd_continue(config: ExperimentConfig) -> int:
    """Branch sweep; prints the mass-monotonicity summary."""
    try:
        problem = config.validate()
        if config.lam_start is None or config.lam_end is None:
            raise ValueError("continue needs --lambda-start and --lambda-end")
        grid = config.grid(problem)
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    ctrl = StepControl(initial=config.step_initial, min_step=config.step_min, max_step=config.step_max)
    try:
        branch = continue_branch(problem, grid, config.lam_start, config.lam_end, ctrl, tol=config.newton_tol)
    except (DegeneratePointError, NehariError, ValueError) as exc:
        print(f"continuation failed: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    md = branch.mass_derivative
    n = len(branch)
    if md.max() < 0:
        print(f"mass_derivative < 0 on all {n} nodes (min {md.min():.4g}, max {md.max():.4g})")
    elif md.min() > 0:
        print(f"mass_derivative > 0 on all {n} nodes (min {md.min():.4g}, max {md.max():.4g})")
    else:
        print(f"mass_derivative changes sign across {n} nodes (min {md.min():.4g}, max {md.max():.4g})")
    bad_v0 = int(np.count_nonzero(branch.v0 >= 0))
    if bad_v0:
        print(f"warning: tangent value at the first node is >= 0 on {bad_v0} nodes")
    reps = None
    failed = False
    if config.verify:
        op = operator(problem, grid)
        reps = []
        for sol, v in zip(branch.solutions, branch.tangents):
            rows = identity_suite(problem, grid, sol, v, op=op)
            reps.append(rows)
            failed = failed or any(r.passed is False for r in rows)
        worst = {}
        for rows in reps:
            for r in rows:
                worst[r.identity_id] = max(worst.get(r.identity_id, 0.0), r.rel_residual)
        for k, v_ in worst.items():
            print(f"identity {k}: worst rel residual {v_:.3e}")
    tag = config.tag or "branch"
    path = write_branch(config, branch, reps, tag=tag, profiles=config.profiles)
    print(f"wrote {path}")
    if branch.truncated:
        print(f"warning: branch truncated: {branch.reason}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    if failed:
        return EXIT_IDENTITY
    return EXIT_OK


def _masscurve_point(args):
    config_dict, c, idx = args
    config = ExperimentConfig.from_dict(config_dict)
    problem = config.problem()
    grid = config.grid(problem)
    res = minimize_on_sphere(problem, grid, c, config.multistart, seed=config.seed + 1000 * idx)
    return res


def cmd_masscurve(config: ExperimentConfig) -> int:
    """Constrained-minimizer sweep; emits curve CSV and the kink report."""
    try:
        problem = config.validate()
        c_grid = config.c_grid()
        grid = config.grid(problem)
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        results = None
        if config.jobs > 1:
            tasks = [(config.to_dict(), float(c), i) for i, c in enumerate(c_grid)]
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                results = list(pool.map(_masscurve_point, tasks))
        curve = mass_curve(problem, grid, c_grid, config.multistart, seed=config.seed, results=results)
    except Exception as exc:
        print(f"mass sweep failed: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    if len(curve) >= 2:
        with np.errstate(invalid="ignore"):
            mid = slice(1, -1)
            dm = 0.5 * (curve.dq_left[mid] + curve.dq_right[mid])
            rel = np.abs(dm - curve.lam[mid]) / np.maximum(np.abs(curve.lam[mid]), 1e-14)
            print(f"{len(curve.kink_indices)} kinks detected; max |m'(c) - lambda(c)|/|lambda(c)| = {np.nanmax(rel):.3g}")
        for i in curve.kink_indices:
            print(f"kink at c ~ {curve.c[i]:.6g}; dq gap {curve.dq_left[i] - curve.dq_right[i]:.6g}")
    else:
        print("single-sample curve: derivative columns empty, no kink claims")
    tag = config.tag or "masscurve"
    path = write_masscurve(config, curve, tag=tag, profiles=config.profiles)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_verify(config: ExperimentConfig | None, artifact_path: str) -> int:
    """Recompute all applicable identities on a stored artifact."""
    try:
        art = load_artifact(artifact_path)
    except ArtifactError as exc:
        print(f"artifact error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    stored = art["config"]
    if config is not None and config.config_hash() != stored.config_hash():
        print("config hash mismatch between supplied config and artifact", file=sys.stderr)
        return EXIT_VALIDATION
    config = stored
    try:
        problem = config.validate()
        grid = config.grid(problem)
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    op = operator(problem, grid)
    rows = []
    kind = art["kind"]
    if kind == "solution":
        if "u" not in art:
            print("artifact stores no profile; cannot verify", file=sys.stderr)
            return EXIT_VALIDATION
        u = np.asarray(art["u"])
        if u.size != grid.n or not np.any(u):
            print("empty or mismatched profile", file=sys.stderr)
            return EXIT_VALIDATION
        meta = art["meta"]
        sol = Solution(
            lam=float(meta["lambda"]),
            u=u,
            residual_norm=float(meta["residual_norm"]),
            mass=float(meta["mass"]),
            energy=float(meta["energy"]),
            converged=bool(meta["converged"]),
        )
        v = None
        try:
            v = branch_tangent(problem, grid, sol, op)
        except Exception:
            pass
        rows = identity_suite(problem, grid, sol, v, op=op)
    elif kind == "branch":
        prof = art.get("profiles")
        if prof is None:
            print("branch artifact stores no profiles; rerun with --profiles", file=sys.stderr)
            return EXIT_VALIDATION
        from .problems import eval_energy
        from .grids import integrate

        for lam, u, v in zip(prof["lam"], prof["U"], prof["V"]):
            sol = Solution(
                lam=float(lam),
                u=u,
                residual_norm=0.0,
                mass=integrate(grid, u**2),
                energy=eval_energy(problem, grid, u, op),
                converged=True,
            )
            rows.extend(identity_suite(problem, grid, sol, v, op=op))
    elif kind == "masscurve":
        prof = art.get("profiles")
        if prof is None:
            print("curve artifact stores no profiles; rerun with --profiles", file=sys.stderr)
            return EXIT_VALIDATION
        from .problems import eval_energy
        from .grids import integrate

        lam_col = art["table"]["lambda"]
        for lam, u in zip(lam_col, prof["U"]):
            sol = Solution(
                lam=float(lam),
                u=u,
                residual_norm=0.0,
                mass=integrate(grid, u**2),
                energy=eval_energy(problem, grid, u, op),
                converged=True,
            )
            rows.extend(identity_suite(problem, grid, sol, op=op))
    else:
        print(f"unknown artifact kind {kind!r}", file=sys.stderr)
        return EXIT_VALIDATION
    if not rows:
        print("no applicable identities", file=sys.stderr)
        return EXIT_VALIDATION
    ok = _print_identity_table(rows)
    return EXIT_OK if ok else EXIT_IDENTITY


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(sp):
    sp.add_argument("--config", help="JSON config file; flags override its entries")
    sp.add_argument("--preset", help="problem preset id")
    sp.add_argument("--s", type=float, help="operator order in (0, 1]")
    sp.add_argument("--N", type=int, help="spatial dimension")
    sp.add_argument("--p", type=float, help="primary power")
    sp.add_argument("--q", type=float, help="secondary power (two-power preset)")
    sp.add_argument("--k", type=float, help="ball weight exponent")
    sp.add_argument("--depth", type=float, help="potential well depth")
    sp.add_argument("--weight-a", type=float, dest="weight_a", help="weight (1+r^2)^-a exponent")
    sp.add_argument("--n", type=int, help="interior node count")
    sp.add_argument("--R", type=float, help="truncation radius (whole space)")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--multistart", type=int)
    sp.add_argument("--jobs", type=int)
    sp.add_argument("--out", dest="out_dir", help="output directory (default $NLSBRANCH_OUT or ./artifacts)")
    sp.add_argument("--tag", help="artifact base name")
    sp.add_argument("--verify", action="store_true", default=None, help="run identity diagnostics")
    sp.add_argument("--no-profiles", dest="profiles", action="store_false", default=None)


_PARAM_KEYS = ("s", "N", "p", "q", "k", "depth", "weight_a")


def _config_from_args(args) -> ExperimentConfig:
    base = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
    cfg = ExperimentConfig.from_dict(base) if base else ExperimentConfig()
    params = dict(cfg.params)
    for key in _PARAM_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    cfg.params = params
    for field_name in (
        "preset", "n", "R", "lam", "lam_start", "lam_end", "c_min", "c_max", "c_count",
        "multistart", "seed", "jobs", "out_dir", "tag", "verify", "profiles",
    ):
        val = getattr(args, field_name, None)
        if val is not None:
            setattr(cfg, field_name, val)
    return cfg


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="nlsbranch", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="single stationary solve")
    _add_common(sp)
    sp.add_argument("--lambda", dest="lam", type=float, help="frequency parameter")

    sp = sub.add_parser("continue", help="branch continuation sweep")
    _add_common(sp)
    sp.add_argument("--lambda-start", dest="lam_start", type=float)
    sp.add_argument("--lambda-end", dest="lam_end", type=float)

    sp = sub.add_parser("masscurve", help="constrained-minimizer sweep")
    _add_common(sp)
    sp.add_argument("--c-min", dest="c_min", type=float)
    sp.add_argument("--c-max", dest="c_max", type=float)
    sp.add_argument("--c-count", dest="c_count", type=int)

    sp = sub.add_parser("verify", help="recheck identities on a stored artifact")
    sp.add_argument("artifact")
    sp.add_argument("--config", help="optional config JSON; its hash must match the artifact")

    args = ap.parse_args(argv)
    if args.command == "verify":
        config = None
        if args.config:
            with open(args.config) as fh:
                config = ExperimentConfig.from_dict(json.load(fh))
        return cmd_verify(config, args.artifact)
    config = _config_from_args(args)
    if args.command == "solve":
        return cmd_solve(config)
    if args.command == "continue":
        return cmd_continue(config)
    if args.command == "masscurve":
        return cmd_masscurve(config)
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
