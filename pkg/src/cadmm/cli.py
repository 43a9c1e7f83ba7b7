# -*- coding: utf-8 -*-

"""
Command-line driver: solve a single problem, benchmark a solver matrix
over a manifest, or run the built-in self checks.

Exit codes: 0 converged, 2 hit the iteration cap, 3 diverged, 1 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import dnnsdp, engine, io, problems
from .dnnsdp import SolverConfig, TuningPolicy, cadmm_solve, dext_solve
from .linalg import SparseSymList, lambda_max_gram, project_psd

EXIT_BY_STATUS = {"Converged": 0, "MaxIters": 2, "Diverged": 3, "Error": 1}


def generate_problem(spec: str) -> dnnsdp.DnnSdpProblem:
    """Build a seeded instance from a "family:size:seed" spec string."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"generate spec must be family:size:seed, got {spec!r}")
    family, size_s, seed_s = parts
    n, seed = int(size_s), int(seed_s)
    name = f"{family}{n}s{seed}"
    if family == "biq":
        return problems.build_biq(problems.random_biq(n, seed), name=name)
    if family == "ebiq":
        return problems.build_ext_biq(problems.random_biq(n, seed), name=name)
    if family == "theta":
        return problems.build_theta_plus(problems.random_graph(n, 0.3, seed), name=name)
    if family == "rcp":
        return problems.random_rcp(n, seed)
    if family == "fap":
        return problems.random_fap(n, seed)
    if family == "qap":
        return problems.random_qap(n, seed)
    raise ValueError(f"unknown family {family!r} "
                     f"(expected biq, ebiq, theta, rcp, fap or qap)")


def _policy_from_overrides(pairs) -> TuningPolicy:
    policy = TuningPolicy()
    for pair in pairs or []:
        if "=" not in pair:
            raise ValueError(f"--policy expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        if not hasattr(policy, key):
            raise ValueError(f"unknown policy field {key!r}")
        current = getattr(policy, key)
        setattr(policy, key, type(current)(value) if current is not None else float(value))
    return policy


def _config_from_args(args, prob) -> SolverConfig:
    cfg = SolverConfig(sigma=args.sigma, alpha=args.alpha, tau_bar=args.tau_bar,
                       eps=args.eps, tau0=args.tau0, tol=args.tol)
    cfg.max_iters = args.max_iters
    return cfg


def _run_one(prob, solver: str, cfg: SolverConfig, policy: TuningPolicy, tau: float):
    if solver == "cadmm":
        return cadmm_solve(prob, cfg, policy)
    if solver == "dext":
        return dext_solve(prob, cfg, tau=tau, policy=policy)
    raise ValueError(f"unknown solver {solver!r} (expected cadmm or dext)")


def cmd_solve(args) -> int:
    if (args.problem is None) == (args.generate is None):
        print("solve: exactly one of --problem or --generate is required",
              file=sys.stderr)
        return 1
    prob = io.read_problem(args.problem) if args.problem else generate_problem(args.generate)
    prob.validate()
    cfg = _config_from_args(args, prob)
    policy = _policy_from_overrides(args.policy)
    result = _run_one(prob, args.solver, cfg, policy, args.tau)
    name = prob.meta.get("name", args.problem or args.generate)
    rec = io.record_from_result(name, args.solver, result)
    print(rec.summary_line())
    if args.out:
        io.write_result(result, result.report, args.out, problem_name=name,
                        solver_name=args.solver,
                        config_echo={"sigma": cfg.sigma, "alpha": cfg.alpha,
                                     "tau_bar": cfg.tau_bar, "eps": cfg.eps,
                                     "tau0": cfg.tau0, "tol": cfg.tol,
                                     "max_iters": cfg.max_iters,
                                     "solver": args.solver, "tau": args.tau})
    return EXIT_BY_STATUS[result.status]


def cmd_bench(args) -> int:
    with open(args.manifest) as fh:
        manifest = json.load(fh)
    solvers = (args.solvers.split(",") if args.solvers
               else manifest.get("solvers", ["cadmm", "dext"]))
    os.makedirs(args.out_dir, exist_ok=True)
    records = []
    for entry in manifest["problems"]:
        if "generate" in entry:
            prob = generate_problem(entry["generate"])
        else:
            prob = io.read_problem(entry["path"])
        name = entry.get("name", prob.meta.get("name", "problem"))
        prob.validate()
        for solver in solvers:
            cfg = SolverConfig(tol=args.tol)
            cfg.max_iters = args.max_iters
            policy = _policy_from_overrides(args.policy)
            result = _run_one(prob, solver, cfg, policy, args.tau)
            rec = io.write_result(
                result, result.report,
                os.path.join(args.out_dir, f"{name}.{solver}.json"),
                problem_name=name, solver_name=solver,
                config_echo={"tol": args.tol, "max_iters": cfg.max_iters,
                             "solver": solver})
            records.append(rec)
            print(rec.summary_line())
    for metric in ("iterations", "time"):
        rows = io.emit_performance_profile(records, metric=metric)
        io.write_profile_csv(rows, os.path.join(args.out_dir, f"profile_{metric}.csv"))
    print(f"wrote {len(records)} records and 2 profiles to {args.out_dir}")
    return 0


def _check(name: str, ok: bool, detail: str = "") -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" ({detail})" if detail else ""))
    return ok


def cmd_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    ok = True

    # adjoint identity on a random constraint collection
    n, m = 8, 6
    rows = []
    for _ in range(m):
        k = int(rng.integers(2, 6))
        i = rng.integers(0, n, size=k)
        j = rng.integers(0, n, size=k)
        lo, hi = np.minimum(i, j), np.maximum(i, j)
        flat = lo * n + hi
        _, keep = np.unique(flat, return_index=True)
        rows.append((lo[keep], hi[keep], rng.standard_normal(keep.size)))
    a = SparseSymList(n, rows)
    worst = 0.0
    for _ in range(100):
        u = rng.standard_normal((n, n))
        u = 0.5 * (u + u.T)
        v = rng.standard_normal(m)
        lhs = float(a.apply(u) @ v)
        rhs = float(np.vdot(u, a.adjoint(v)))
        worst = max(worst, abs(lhs - rhs) /
                    (np.linalg.norm(u) * np.linalg.norm(v)))
    ok &= _check("adjoint identity", worst <= 1e-12, f"worst {worst:.2e}")

    # PSD projection: idempotent and Moreau decomposition
    x = rng.standard_normal((7, 7))
    x = 0.5 * (x + x.T)
    px = project_psd(x)
    moreau = np.linalg.norm(x - (px - project_psd(-x)))
    idem = np.linalg.norm(project_psd(px) - px)
    ok &= _check("psd projection Moreau + idempotent",
                 moreau <= 1e-10 and idem <= 1e-10,
                 f"moreau {moreau:.2e} idem {idem:.2e}")

    # power iteration vs dense Gram eigensolve
    lam = lambda_max_gram(a)
    dense = float(np.linalg.eigvalsh(a.gram()).max()) * (1.0 + 1e-6)
    rel = abs(lam - dense) / dense
    ok &= _check("gram spectral bound", rel <= 1e-6, f"rel {rel:.2e}")

    # correction identity and positive definiteness on a dense toy run
    from . import toys
    toy = toys.random_quadratic_toy(4, (3, 4, 5, 4), 6, seed=args.seed,
                                    rho_blocks=(1,))
    ops = engine.build_theory_operators(toy.problem, 0.999)
    gmin = float(np.linalg.eigvalsh(0.5 * (ops.g + ops.g.T)).min())
    cfg = SolverConfig(tol=0.0, max_iters=60, record_history=True)
    res = engine.solve(toy.problem, cfg)
    worst_id = 0.0
    for step in res.history:
        w_new = np.concatenate([v.ravel() for v in step["z_tilde"][1:]])
        w_old = np.concatenate([v.ravel() for v in step["z_tilde_prev"][1:]])
        w_pred = np.concatenate([v.ravel() for v in step["z"][1:]])
        lhs = ops.h @ (w_new - w_old)
        rhs = cfg.alpha * (w_pred - w_old)
        worst_id = max(worst_id, float(np.linalg.norm(lhs - rhs)) /
                       (1.0 + float(np.linalg.norm(w_old))))
    ok &= _check("correction identity", worst_id <= 1e-9, f"worst {worst_id:.2e}")
    ok &= _check("correction operator positive definite", gmin > 0.0,
                 f"min eig {gmin:.2e}")

    # subproblem closed forms vs a projected-gradient pass on one instance
    prob = generate_problem(f"ebiq:8:{args.seed}")
    prob.validate()
    lamI = dnnsdp.cached_lambda_max(prob)
    it = dnnsdp.initial_iterate(prob, sigma=1.0, tau0=1.95)
    it.X = rng.standard_normal((prob.n, prob.n))
    it.X = 0.5 * (it.X + it.X.T)
    r1 = it.t_Z + prob.A_E.adjoint(it.t_yE) + it.t_S - prob.C
    y_closed = dnnsdp.update_yI(prob, lamI, it.X, r1, it.t_yI, 1.0)
    y = np.zeros(prob.A_I.m)
    step = 0.4 / lamI
    for _ in range(400):
        grad = (-prob.b_I + prob.A_I.apply(it.X)
                + prob.A_I.apply(prob.A_I.adjoint(y) + r1)
                + (lamI * (y - it.t_yI) - prob.A_I.apply(prob.A_I.adjoint(y - it.t_yI))))
        y = np.maximum(y - step * grad, 0.0)
    gap = float(np.linalg.norm(y - y_closed))
    ok &= _check("inequality-block closed form", gap <= 1e-8, f"gap {gap:.2e}")

    # end-to-end tiny solve with self-certifying residuals
    small = generate_problem(f"biq:10:{args.seed}")
    res2 = cadmm_solve(small, SolverConfig(tol=1e-6))
    ok &= _check("end-to-end certificate", res2.status == "Converged"
                 and res2.report.eta < 1e-6,
                 f"iters {res2.iterations} eta {res2.report.eta:.2e}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cadmm",
        description="Corrected multi-block ADMM for doubly nonnegative SDPs")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve one problem")
    ps.add_argument("--problem", help="path to a problem document")
    ps.add_argument("--generate", help="family:size:seed instance spec")
    ps.add_argument("--solver", choices=("cadmm", "dext"), default="cadmm")
    ps.add_argument("--tau", type=float, default=1.618,
                    help="fixed multiplier step for dext")
    ps.add_argument("--sigma", type=float, default=1.0)
    ps.add_argument("--alpha", type=float, default=0.999)
    ps.add_argument("--tau0", type=float, default=1.95)
    ps.add_argument("--tau-bar", dest="tau_bar", type=float, default=0.1)
    ps.add_argument("--eps", type=float, default=0.1)
    ps.add_argument("--tol", type=float, default=1e-6)
    ps.add_argument("--max-iters", type=int, default=None)
    ps.add_argument("--policy", action="append", metavar="KEY=VALUE",
                    help="tuning policy override (repeatable)")
    ps.add_argument("--out", help="write the result document here")
    ps.set_defaults(func=cmd_solve)

    pb = sub.add_parser("bench", help="run a solver matrix over a manifest")
    pb.add_argument("--manifest", required=True,
                    help='JSON manifest {"problems": [{"generate"|"path", "name"}]}')
    pb.add_argument("--solvers", help="comma-separated subset of cadmm,dext")
    pb.add_argument("--tau", type=float, default=1.618)
    pb.add_argument("--tol", type=float, default=1e-6)
    pb.add_argument("--max-iters", type=int, default=None)
    pb.add_argument("--policy", action="append", metavar="KEY=VALUE")
    pb.add_argument("--out-dir", default="bench_out")
    pb.set_defaults(func=cmd_bench)

    pc = sub.add_parser("check", help="run the built-in invariant checks")
    pc.add_argument("--seed", type=int, default=0)
    pc.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
