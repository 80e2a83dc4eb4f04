"""Command line front end.

Subcommands: predict, mfor, simulate, sweep, qk, bounds, y0.  Laws always
come from JSON files (one schema, one validator) and every randomized
subcommand requires an explicit --seed, so identical invocations produce
byte-identical output.  Exit codes: 0 success, 2 validation problem,
1 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback

from .analytic import (
    DomainError,
    KappaZeroError,
    m_for_c,
    qk_bound_a,
    qk_bound_b,
    qk_exact,
    threshold_quantities,
)
from .experiment import (
    SweepSpec,
    point_to_jsonable,
    points_to_csv,
    points_to_json,
    run_point,
    run_sweep,
    y0_poisson_test,
)
from .laws import LawValidationError, load_law_file

DOMINANCE_TOL = 1e-12


def _add_law(parser):
    parser.add_argument("--law", required=True, help="path to a law JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cagraph",
        description="Community affiliation graphs: threshold predictions and "
        "Monte Carlo verification.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("predict", help="closed-form threshold quantities at (n, m)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _add_law(p)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("mfor", help="community count whose coordinate is closest to c")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    _add_law(p)
    p.set_defaults(func=_cmd_mfor)

    p = sub.add_parser("simulate", help="Monte Carlo estimate at fixed (n, m)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _add_law(p)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="also write the JSON row to this file")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="sweep the threshold coordinate c")
    p.add_argument("--n", type=int, required=True)
    _add_law(p)
    p.add_argument("--c", required=True, help="comma-separated c values")
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("qk", help="exact probability of an edge-free bipartition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.set_defaults(func=_cmd_qk)

    p = sub.add_parser("bounds", help="tabulate the crossing bounds against the exact value")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("y0", help="isolated-vertex statistics vs. their Poisson limit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _add_law(p)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_y0)

    return parser


def _cmd_predict(args) -> int:
    law = load_law_file(args.law)
    tq = threshold_quantities(args.n, args.m, law)
    print(json.dumps({
        "kappa": tq.kappa,
        "kappa_truncated": tq.kappa_truncated,
        "alpha": tq.alpha,
        "lambda": tq.lam,
        "p_pred": tq.p_pred,
    }))
    return 0


def _cmd_mfor(args) -> int:
    law = load_law_file(args.law)
    m = m_for_c(args.n, args.c, law)
    realized = threshold_quantities(args.n, m, law).lam
    print(json.dumps({"m": m, "lambda": realized}))
    return 0


def _cmd_simulate(args) -> int:
    law = load_law_file(args.law)
    point = run_point(args.n, args.m, law, args.reps, args.seed)
    payload = json.dumps(point_to_jsonable(point), indent=2) + "\n"
    sys.stdout.write(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    return 0


def _parse_c_list(raw: str):
    try:
        values = tuple(float(tok) for tok in raw.split(",") if tok.strip())
    except ValueError as exc:
        raise ValueError(f"--c must be a comma-separated list of reals: {exc}")
    if not values:
        raise ValueError("--c must contain at least one value")
    return values


def _cmd_sweep(args) -> int:
    law = load_law_file(args.law)
    spec = SweepSpec(
        n=args.n,
        law=law,
        c_values=_parse_c_list(args.c),
        replicates=args.reps,
        master_seed=args.seed,
    )
    points = run_sweep(spec)
    rendered = points_to_csv(points) if args.format == "csv" else points_to_json(points)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(rendered)
    print(f"wrote {len(points)} points to {args.out}")
    return 0


def _cmd_qk(args) -> int:
    print(repr(qk_exact(args.n, args.k, args.x, args.q)))
    return 0


def _cmd_bounds(args) -> int:
    kmax = args.kmax if args.kmax is not None else args.n // 2
    if not 1 <= kmax <= args.n // 2:
        raise DomainError(f"domain: --kmax must lie in [1, n/2], got {kmax}")
    print("k,qk_exact,bound_a,bound_b,dominated_by_a,dominated_by_b")
    for k in range(1, kmax + 1):
        exact = qk_exact(args.n, k, args.x, args.q)
        bound_a = qk_bound_a(args.n, k, args.x, args.q)
        bound_b = qk_bound_b(args.n, k, args.x, args.q)
        dom_a = exact <= bound_a + DOMINANCE_TOL
        dom_b = exact <= bound_b + DOMINANCE_TOL
        print(f"{k},{exact!r},{bound_a!r},{bound_b!r},"
              f"{str(dom_a).lower()},{str(dom_b).lower()}")
    return 0


def _cmd_y0(args) -> int:
    law = load_law_file(args.law)
    point = run_point(args.n, args.m, law, args.reps, args.seed)
    report = y0_poisson_test(point)
    print(json.dumps({
        "n": args.n,
        "m": args.m,
        "lambda": point.lam,
        "poisson_mean": report.poisson_mean,
        "y0_mean": report.y0_mean,
        "tv_distance": report.tv_distance,
        "moment_ratios": list(report.moment_ratios),
        "kappa_zero": report.kappa_zero,
    }))
    return 0


def _fuse_c_values(argv):
    # "--c -2,-1,0" would be read as a dangling flag; fold it into --c=...
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--c" and i + 1 < len(argv):
            out.append(f"--c={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_fuse_c_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except LawValidationError as exc:
        print(f"error: invalid law: {exc}", file=sys.stderr)
        return 2
    except (DomainError, KappaZeroError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:  # pragma: no cover - defensive
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
