"""Command-line interface: ``chaoslimits <subcommand> [flags]``.

Subcommands
-----------
- ``targets-list``: the named target measures and their parameters.
- ``targets-coeffs``: diffusion coefficient (alpha, beta, gamma) of a target.
- ``classify``: sort a coefficient triple into the reachable-limit classes.
- ``diagnose``: fourth-moment diagnostics along a kernel family.
- ``simulate``: Euler-Maruyama sampling plus empirical distances.
- ``stein-check``: residual of the Stein-equation solver on interior grids.
- ``oracle-check``: closed-form moments vs the Wick-pairing oracle (CI gate).

Reports are structured text on stdout with every float at 17 significant
digits and a ``schema_version`` field.  Exit codes: 0 success, 2 validation
error (bad flag or file field), 1 numeric failure.  Every stochastic
subcommand requires ``--seed``; given the same flags the output is
byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as cio
from .chaos import (
    ChaosVector,
    chaos_product,
    eval_multiple_integral,
    random_kernel,
    sample_gaussian,
    wick_moment,
)
from .diagnostics import (
    classifier,
    gamma_fixed_family,
    gaussian_clt_family,
    moment3,
    moment4,
    run_family_diagnostics,
    stein_residual_l2,
    stein_residual_l2_direct,
)
from .simulate import (
    EmpiricalDistribution,
    SimConfig,
    ks_distance,
    simulate,
    stein_dictionary_test,
    wasserstein1_distance,
)
from .targets import NAMED_TARGETS, named_target, stein_solution_residual

_STEIN_CHECK_TOL = 1e-6


def _add_target_flags(sub):
    sub.add_argument("--name", help="named target (see targets-list)")
    sub.add_argument("--target", help="named target or target file path")
    sub.add_argument("--nu", type=float, help="tail index (student, pareto)")
    sub.add_argument("--a", type=float,
                     help="shape (gamma, f, beta; doubles as the"
                          " inverse_gamma shape delta)")
    sub.add_argument("--b", type=float, help="second shape (f, beta)")
    sub.add_argument("--lambda", dest="lam", type=float,
                     help="rate (gamma, inverse_gamma)")
    sub.add_argument("--gamma", type=float, help="variance (normal)")


def _resolve_target(args):
    """Target from --name/--target plus parameter flags."""
    by_name = getattr(args, "name", None)
    source = getattr(args, "target", None) or by_name
    if source is None:
        raise ValueError("provide a target via --name or --target")
    if source == by_name and source not in NAMED_TARGETS:
        raise ValueError(
            f"--name: unknown target {source!r}; choose from"
            f" {sorted(NAMED_TARGETS)}"
        )
    if source in NAMED_TARGETS:
        wanted = NAMED_TARGETS[source][1]
        params = {}
        for key in wanted:
            flag = {"delta": "a"}.get(key, key)
            val = getattr(args, flag, None)
            if val is not None:
                params[key] = val
        return named_target(source, **params)
    return cio.load_target(source)


def _target_doc(target):
    params = {cio.file_param_name(k): v for k, v in target.params.items()}
    return {"name": target.name, "params": params}


def _emit(doc, out=None):
    text = cio.dumps_struct(doc)
    print(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")


# --- subcommands ---------------------------------------------------------------

def _cmd_targets_list(args):
    rows = []
    for name, (_, wanted) in NAMED_TARGETS.items():
        rows.append({
            "name": name,
            "params": [cio.file_param_name(p) for p in wanted],
        })
    _emit({"schema_version": cio.SCHEMA_VERSION, "targets": rows}, args.out)
    return 0


def _cmd_targets_coeffs(args):
    target = _resolve_target(args)
    alpha, beta, gamma = target.coeff.as_tuple()
    _emit({
        "schema_version": cio.SCHEMA_VERSION,
        "target": _target_doc(target),
        "alpha": alpha,
        "beta": beta,
        "gamma": gamma,
    }, args.out)
    return 0


def _verdict_doc(v):
    doc = {
        "kind": v.kind,
        "reason": v.reason,
        "alpha": v.alpha,
        "beta": v.beta,
        "gamma": v.gamma,
        "c0": v.c0,
        "delta": v.delta,
        "ec_discriminant": v.ec_discriminant,
        "roots": list(v.roots),
    }
    if v.gamma_params is not None:
        doc["gamma_params"] = {"lambda": v.gamma_params[0], "a": v.gamma_params[1]}
    if v.c0_sign_argument_applies is not None:
        doc["c0_sign_argument_applies"] = v.c0_sign_argument_applies
    return doc


def _cmd_classify(args):
    verdict = classifier(args.alpha, args.beta, args.gamma)
    _emit({
        "schema_version": cio.SCHEMA_VERSION,
        "classifier": _verdict_doc(verdict),
    }, args.out)
    return 0


def _parse_m_list(text):
    try:
        ms = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"--m: expected comma-separated integers, got {text!r}")
    if not ms:
        raise ValueError("--m: empty list")
    return ms


def _pair_doc(pair):
    return {"value": pair[0], "stderr": pair[1]}


def _cmd_diagnose(args):
    if args.mc and args.seed is None:
        raise ValueError("--seed is required when --mc > 0")
    if args.family == "gaussian_clt":
        family = gaussian_clt_family()
    elif args.family == "gamma_fixed":
        k = int(args.a) if args.a is not None else 1
        family = gamma_fixed_family(k)
    else:
        raise ValueError(f"--family: unknown family {args.family!r}")
    ms = _parse_m_list(args.m)
    target = _resolve_target(args)
    report = run_family_diagnostics(
        family, ms, target, mc_samples=args.mc, seed=args.seed
    )
    members = []
    for rec in report.members:
        row = dict(rec)
        row["contraction_norms"] = {
            str(p): v for p, v in rec["contraction_norms"].items()
        }
        for key in ("stein_residual_l2_mc", "prop24_gap_mc", "stein_discrepancy_l1"):
            if key in row:
                row[key] = _pair_doc(row[key])
        members.append(row)
    trends = {
        key: [None if v != v else v for v in vals]  # NaN -> null
        for key, vals in report.trends.items()
    }
    _emit({
        "schema_version": cio.SCHEMA_VERSION,
        "family": report.family,
        "order": report.order,
        "target": {"name": report.target_name, "params": {
            cio.file_param_name(k): v for k, v in report.target_params.items()
        }},
        "coeff": {"alpha": report.coeff[0], "beta": report.coeff[1],
                  "gamma": report.coeff[2]},
        "members": members,
        "classifier": _verdict_doc(report.verdict),
        "trends": trends,
    }, args.out)
    return 0


def _cmd_simulate(args):
    target = _resolve_target(args)
    cfg = SimConfig(
        dt=args.dt,
        burn_in=args.burn_in,
        samples=args.samples,
        seed=args.seed,
    )
    emp = simulate(target, cfg)
    exact = EmpiricalDistribution(
        target.sample_exact(emp.count, seed=cfg.seed + 1)
    )
    dictionary, dict_ok = stein_dictionary_test(emp, target)
    doc = {
        "schema_version": cio.SCHEMA_VERSION,
        "target": _target_doc(target),
        "config": dict(emp.meta),
        "results": {
            "count": emp.count,
            "mean": emp.mean(),
            "var": emp.var(),
            "ks_distance": ks_distance(emp, target),
            "w1_vs_exact_sampling": wasserstein1_distance(emp, exact),
            "clamp_fraction": emp.clamp_fraction,
            "clamping_flagged": emp.clamping_flagged,
            "dictionary": {
                name: {"mean": m, "stderr": s, "z": z}
                for name, (m, s, z) in dictionary.items()
            },
            "dictionary_pass": dict_ok,
        },
    }
    doc["config"].pop("target", None)
    doc["config"].pop("params", None)
    text = cio.dumps_struct(doc)
    print(text)
    if args.out:
        cio.save_samples(emp, args.out)
    return 0


def _cmd_stein_check(args):
    target = _resolve_target(args)
    target.validate()
    xs = target.interior_grid(200)
    residuals = {}
    worst = 0.0
    for label, f in (("x", lambda y: y), ("x^2", lambda y: y**2)):
        res = float(np.max(np.abs(stein_solution_residual(target, f, xs))))
        residuals[label] = res
        worst = max(worst, res)
    ok = worst < _STEIN_CHECK_TOL
    _emit({
        "schema_version": cio.SCHEMA_VERSION,
        "target": _target_doc(target),
        "grid_points": len(xs),
        "max_abs_residual": residuals,
        "tolerance": _STEIN_CHECK_TOL,
        "pass": ok,
    }, args.out)
    return 0 if ok else 1


def _cmd_oracle_check(args):
    rng = np.random.default_rng(args.seed)
    trials = args.m if args.m else 60
    counts = {}

    def record(name, ok):
        p, f = counts.get(name, (0, 0))
        counts[name] = (p + 1, f) if ok else (p, f + 1)

    for _ in range(trials):
        n = int(rng.integers(1, 5))
        d = int(rng.integers(1, 7))
        f = random_kernel(rng, d, n, nnz=int(rng.integers(1, 5)))
        if not f.entries:
            continue
        w3, w4 = wick_moment([f], [3]), wick_moment([f], [4])
        record("moment3_vs_wick",
               abs(moment3(f) - w3) <= 1e-10 * max(1.0, abs(w3)))
        record("moment4_vs_wick",
               abs(moment4(f) - w4) <= 1e-10 * max(1.0, abs(w4)))
        coeff = tuple(rng.normal(size=3))
        a = stein_residual_l2(f, coeff)
        b = stein_residual_l2_direct(f, coeff)
        record("residual_decomposition_vs_direct",
               abs(a - b) <= 1e-10 * max(1.0, abs(a)))

    for _ in range(max(trials // 5, 8)):
        d = int(rng.integers(1, 5))
        fa = random_kernel(rng, d, int(rng.integers(1, 4)), 3)
        fb = random_kernel(rng, d, int(rng.integers(1, 4)), 3)
        if not fa.entries or not fb.entries:
            continue
        prod = chaos_product(ChaosVector.from_kernel(fa),
                             ChaosVector.from_kernel(fb))
        x = sample_gaussian(d, 200, int(rng.integers(0, 2**32)))
        lhs = eval_multiple_integral(fa, x) * eval_multiple_integral(fb, x)
        rhs = eval_multiple_integral(prod, x)
        scale = max(1.0, float(np.max(np.abs(lhs))))
        record("product_formula_pathwise",
               float(np.max(np.abs(lhs - rhs))) <= 1e-10 * scale)

    failures = sum(f for _, f in counts.values())
    _emit({
        "schema_version": cio.SCHEMA_VERSION,
        "trials": trials,
        "checks": {name: {"pass": p, "fail": f}
                   for name, (p, f) in sorted(counts.items())},
        "failures": failures,
    }, args.out)
    return 0 if failures == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chaoslimits",
        description="Chaos-limit diagnostics, Stein targets and SDE sampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("targets-list", help="list named target measures")
    p.add_argument("--out", help="also write the report to this path")
    p.set_defaults(func=_cmd_targets_list)

    p = sub.add_parser("targets-coeffs",
                       help="diffusion coefficient of a target")
    _add_target_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_targets_coeffs)

    p = sub.add_parser("classify", help="classify a coefficient triple")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("diagnose", help="kernel-family diagnostics report")
    p.add_argument("--family", required=True,
                   help="gaussian_clt or gamma_fixed (k via --a)")
    p.add_argument("--m", required=True,
                   help="comma-separated member indices, e.g. 1,2,4,8")
    p.add_argument("--mc", type=int, default=0,
                   help="Monte Carlo samples per member (0 = exact only)")
    p.add_argument("--seed", type=int)
    _add_target_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("simulate", help="Euler-Maruyama sampling of a target")
    _add_target_flags(p)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--burn-in", dest="burn_in", type=int, default=100_000)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="write the sample dump to this path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("stein-check",
                       help="Stein-equation solver residual on interior grids")
    _add_target_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stein_check)

    p = sub.add_parser("oracle-check",
                       help="closed forms vs the Wick oracle (CI gate)")
    p.add_argument("--m", type=int, default=60, help="number of random kernels")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
