"""``nonjump`` command-line entry point.

Exit codes: 0 pass, 1 verdict fail, 2 usage or input error, 3 budget exceeded.
``NONJUMP_SEED`` sets the default seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from . import __version__
from .errors import BudgetExceededError
from .frankl_rodl import check_nonjump_certificate, fr_construction, limitation_bound
from .io import emit_report, format_pattern, parse_pattern, write_pattern
from .lagrangian import (SolverConfig, certified_lagrangian, lagrangian_grid_oracle,
                         lagrangian_numeric, lagrangian_support_enum)
from .pattern import PatternError, as_graph
from .randgraph import find_bad_sets, sample_sparse_graph
from .repro import repro_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _default_seed() -> int:
    raw = os.environ.get("NONJUMP_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"nonjump: NONJUMP_SEED must be an integer, got {raw!r}") from None


def _out(data: bytes):
    sys.stdout.buffer.write(data)
    sys.stdout.flush()


def _config(args, **overrides) -> SolverConfig:
    kw = {"seed": args.seed, "threads": args.threads}
    kw.update(overrides)
    return SolverConfig(**kw)


def _config_echo(cfg: SolverConfig) -> dict:
    return dataclasses.asdict(cfg)


def _lagrangian_summary(res) -> dict:
    return {"value": res.value, "witness": res.witness, "residual": res.residual,
            "support": res.support, "classification": res.classification,
            "converged": res.converged, "certified": res.certified}


def cmd_lagrangian(args) -> int:
    P = parse_pattern(args.pattern)
    cfg = _config(args, restarts=args.restarts)
    res = lagrangian_numeric(P, cfg)
    out = {"pattern": P, "numeric": _lagrangian_summary(res)}
    if args.support_enum:
        enum = lagrangian_support_enum(P, seeds=res.diagnostics["endpoints"], cfg=cfg,
                                       max_n=max(cfg.support_max_n, P.n))
        out["support_enum"] = _lagrangian_summary(enum)
        out["support_enum"]["stationary_points"] = [
            {"support": p.support, "point": p.point, "value": p.value, "kind": p.kind,
             "hessian_det": p.hessian_det} for p in enum.stationary_points]
        out["support_enum_abs_diff"] = abs(enum.value - res.value)
    if args.grid:
        grid = lagrangian_grid_oracle(P, args.grid)
        out["grid"] = {"N": args.grid, "value": grid.value, "witness": grid.witness}
        out["grid_abs_diff"] = abs(grid.value - res.value)
    _out(emit_report(out, "json" if args.json else "text", seed=args.seed,
                     config=_config_echo(cfg)))
    return EXIT_PASS if res.converged else EXIT_FAIL


def cmd_frv(args) -> int:
    P = parse_pattern(args.pattern)
    F = fr_construction(P, args.pivot)
    if args.output == "-":
        sys.stdout.write(format_pattern(F))
    else:
        write_pattern(F, args.output)
    return EXIT_PASS


def cmd_certify(args) -> int:
    P = parse_pattern(args.pattern)
    cfg = _config(args)
    rep = check_nonjump_certificate(P, args.pivot, cfg, tol=args.tol)
    out = {"verdict": rep.verdict, "reasons": rep.reasons, "pattern": P, "pivot": rep.pivot,
           "alpha": rep.alpha, "lambda_P": _lagrangian_summary(rep.lambda_P),
           "lambda_FR": _lagrangian_summary(rep.lambda_FR),
           "abs_gap": abs(rep.gap), "tol": rep.tol, "pivot_weight": rep.pivot_weight,
           "pivot_witness": rep.pivot_witness, "multiplicity_ok": rep.multiplicity_ok,
           "note": rep.note}
    _out(emit_report(out, "json" if args.json else "text", seed=args.seed,
                     config=_config_echo(cfg)))
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_bounds(args) -> int:
    if args.r < 3:
        print("nonjump: bounds needs --r >= 3", file=sys.stderr)
        return EXIT_USAGE
    _out(emit_report({"r": args.r, "limitation_bound": limitation_bound(args.r)},
                     "json" if args.json else "text"))
    return EXIT_PASS


def cmd_sample(args) -> int:
    rep = sample_sparse_graph(args.r, args.m, args.c, args.t, args.seed, retries=args.retries,
                              budget=args.budget)
    if args.output:
        write_pattern(rep.graph, args.output)
    summary = {k: getattr(rep, k) for k in ("r", "t", "m", "c", "p", "edges_before",
                                            "edges_after", "bad_sets_found", "target",
                                            "verified", "success", "attempt")}
    summary["attempts_log"] = rep.attempts_log
    if args.json:
        summary["graph"] = rep.graph
        _out(emit_report(summary, "json", seed=args.seed))
    elif args.output:
        _out(emit_report(summary, "text", seed=args.seed))
    else:
        sys.stdout.write(format_pattern(rep.graph))
        print(f"# edges {rep.edges_after} (target {rep.target:.6g}), verified={rep.verified}, "
              f"success={rep.success}, attempt={rep.attempt}", file=sys.stderr)
    return EXIT_PASS if rep.success else EXIT_FAIL


def cmd_verify(args) -> int:
    G = as_graph(parse_pattern(args.graph))
    bad = find_bad_sets(G, args.m, budget=args.budget, spanned_only=True)
    out = {"r": G.r, "n": G.n, "edges": len(G.edges), "m": args.m, "sparse": not bad,
           "bad_sets": [list(s) for s in bad[:20]], "bad_sets_found": len(bad)}
    _out(emit_report(out, "json" if args.json else "text"))
    return EXIT_PASS if not bad else EXIT_FAIL


def cmd_repro(args) -> int:
    suite = repro_suite(_config(args))
    rows = [{"case": c.case, "verdict": c.verdict, "pivot": c.pivot,
             "measured_alpha": c.measured_alpha, "expected_alpha": c.expected_alpha,
             "abs_diff": c.abs_error, "tolerance": c.tolerance, "reasons": c.reasons,
             "seconds": round(c.seconds, 3)} for c in suite.cases]
    if args.json:
        _out(emit_report({"passed": suite.passed, "cases": rows}, "json", seed=args.seed))
    else:
        for row in rows:
            print(f"{row['verdict'].upper():4s} {row['case']:16s} alpha={row['measured_alpha']!r} "
                  f"expected={row['expected_alpha']!r} |diff|={row['abs_diff']:.3g} "
                  f"({row['seconds']}s)")
            for reason in row["reasons"]:
                print(f"     - {reason}")
        print(f"{'all cases passed' if suite.passed else 'FAILURES'} in {suite.seconds:.1f}s")
    return EXIT_PASS if suite.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    seed = _default_seed()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=seed,
                        help="RNG seed (default from NONJUMP_SEED, else 0)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker threads (results do not depend on this)")
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    parser = argparse.ArgumentParser(prog="nonjump", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nonjump {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lagrangian", parents=[common], help="Lagrangian of a pattern")
    p.add_argument("pattern", help="pattern file, or - for stdin")
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--grid", type=int, default=0, metavar="N",
                   help="also run the grid oracle with denominator N")
    p.add_argument("--support-enum", action="store_true",
                   help="also enumerate stationary points on every face")
    p.set_defaults(func=cmd_lagrangian)

    p = sub.add_parser("frv", parents=[common], help="write the Frankl-Rödl pattern FR_v(P)")
    p.add_argument("pattern")
    p.add_argument("--pivot", type=int, required=True)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_frv)

    p = sub.add_parser("certify", parents=[common], help="check a non-jump certificate")
    p.add_argument("pattern")
    p.add_argument("--pivot", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("bounds", parents=[common], help="smallest certifiable alpha for r")
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sample", parents=[common], help="sample a locally sparse r-graph")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--retries", type=int, default=20)
    p.add_argument("--budget", type=int, default=10 ** 8)
    p.add_argument("-o", "--output", help="write the graph to this file")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", parents=[common], help="check the local sparsity property")
    p.add_argument("graph")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--budget", type=int, default=10 ** 8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("repro", parents=[common], help="run the built-in certificate cases")
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"nonjump: budget exceeded: {exc} (required {exc.required}, budget {exc.budget})",
              file=sys.stderr)
        return EXIT_BUDGET
    except (PatternError, ValueError, OSError) as exc:
        print(f"nonjump: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
