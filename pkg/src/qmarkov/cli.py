"""Command line front end.

Exit codes: 0 pass, 1 semantic failure, 2 malformed or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .conjugacy import conj_build, conj_verify, verification_grid
from .errors import InternalInvariantBreach, PatternFailed, QMarkovError, SchemaError
from .inverse_limit import il_detect_empty, il_sample_threads
from .io import exact_and_decimal, load_system, load_witness, write_csv
from .numerics import fmt, to_decimal
from .pattern import pattern_verify
from .qm_function import QuasiMarkovFunction, qmf_graph_samples, qmf_verify_pair

OK, FAIL, BAD_INPUT = 0, 1, 2


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def graph_rows(F: QuasiMarkovFunction, points: int) -> list[tuple[Fraction, Fraction, str]]:
    """Uniform samples of the graph, plus one-sided limits wherever F jumps."""
    rows = [(t, y, "value") for t, y in qmf_graph_samples(F, points)]
    sampled = {t for t, _, _ in rows}
    for a in F.breakpoints():
        vals = F.eval(a).endpoints()
        sides = []
        if a > F.domain.lo:
            sides.append(("limit-left", F.limit(a, "left")))
        if a < F.domain.hi:
            sides.append(("limit-right", F.limit(a, "right")))
        if all(vals == [y] for _, y in sides):
            continue
        if a not in sampled:
            rows.extend((a, y, "value") for y in vals)
        rows.extend((a, y, kind) for kind, y in sides if y not in vals)
    rows.sort(key=lambda r: (r[0], r[2] != "limit-left", r[2] == "limit-right"))
    return rows


def cmd_check_pair(args) -> int:
    spec = load_system(args.system)
    n = args.level
    if not 1 <= n <= len(spec.levels):
        raise SchemaError("levels", f"level {n} is not described (1..{len(spec.levels)})")
    report = qmf_verify_pair(spec.function(n), spec.markov_set(n + 1), spec.markov_set(n), args.depth)
    _emit({"level": n, **report.to_dict()})
    return OK if report.passed else FAIL


def cmd_check_pattern(args) -> int:
    S1, S2 = load_system(args.sysA), load_system(args.sysB)
    w = load_witness(args.witness, S1, S2)
    pairs = [(name, n, r) for name, S in (("A", S1), ("B", S2)) for n, r in S.check_pairs(args.depth)]
    bad_pairs = [{"system": name, "level": n, **r.to_dict()} for name, n, r in pairs if not r.passed]
    report = pattern_verify(S1, S2, w, args.depth)
    out = report.to_dict()
    if bad_pairs:
        out["verdict"] = "fail"
        out["pair_failures"] = bad_pairs
    _emit(out)
    return OK if report.passed and not bad_pairs else FAIL


def cmd_conjugacy(args) -> int:
    S1, S2 = load_system(args.sysA), load_system(args.sysB)
    w = load_witness(args.witness, S1, S2)
    try:
        c = conj_build(S1, S2, w, args.depth)
    except PatternFailed as exc:
        _emit({"verdict": "fail", "stage": "pattern", **exc.report.to_dict()})
        return FAIL
    c.materialize(args.levels + 1)
    checks = []
    for n in range(1, args.levels + 1):
        rep = conj_verify(c, n, verification_grid(S1, n + 1, args.grid, args.tail_depth))
        checks.append(rep)
        if not rep.passed:
            break
    rows = []
    for n in range(1, args.levels + 1):
        for t in verification_grid(S1, n, args.grid, args.tail_depth):
            h = c.eval(n, t)
            rows.append([n] + exact_and_decimal([t, h], args.decimals))
    written = 0
    if args.out:
        written = write_csv(args.out, ["level", "t", "h", "t_decimal", "h_decimal"], rows)
    passed = all(r.passed for r in checks)
    _emit({"verdict": "pass" if passed else "fail", "levels": [r.to_dict() for r in checks], "rows": written or len(rows)})
    return OK if passed else FAIL


def cmd_inverse_limit(args) -> int:
    spec = load_system(args.system)
    verdict = il_detect_empty(spec, args.depth)
    out = verdict.to_dict()
    if verdict.kind != "CertifiedEmpty":
        threads = il_sample_threads(spec, args.depth, args.samples)
        out["threads"] = len(threads)
        if args.out:
            N = args.depth
            header = [f"x{i}" for i in range(1, N + 1)] + [f"x{i}_decimal" for i in range(1, N + 1)]
            write_csv(args.out, header, (exact_and_decimal(t.coords, args.decimals) for t in threads))
            out["csv"] = str(args.out)
    _emit(out)
    return OK


def cmd_plot(args) -> int:
    spec = load_system(args.system)
    n = args.level
    if not 1 <= n <= len(spec.levels):
        raise SchemaError("levels", f"level {n} is not described (1..{len(spec.levels)})")
    rows = graph_rows(spec.function(n), args.points)
    body = [[fmt(t), fmt(y), to_decimal(t, args.decimals), to_decimal(y, args.decimals), kind] for t, y, kind in rows]
    header = ["t", "f", "t_decimal", "f_decimal", "kind"]
    if args.out:
        write_csv(args.out, header, body)
        _emit({"rows": len(body), "csv": str(args.out)})
    else:
        print(",".join(header))
        for r in body:
            print(",".join(r))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmarkov", description="Quasi Markov interval maps, patterns and conjugacies.")
    p.add_argument("--decimals", type=int, default=12, help="significant digits for decimal columns")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, depth=8):
        sp.add_argument("--depth", type=int, default=depth, help="explicit tail depth for checks")
        sp.add_argument("--decimals", type=int, default=argparse.SUPPRESS)

    sp = sub.add_parser("check-pair", help="check the Markov pair at one level")
    sp.add_argument("system")
    sp.add_argument("--level", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_check_pair)

    sp = sub.add_parser("check-pattern", help="check that two systems follow the same pattern")
    sp.add_argument("sysA")
    sp.add_argument("sysB")
    sp.add_argument("--witness", default="canonical")
    common(sp)
    sp.set_defaults(func=cmd_check_pattern)

    sp = sub.add_parser("conjugacy", help="build and verify the homeomorphisms h_1..h_L")
    sp.add_argument("sysA")
    sp.add_argument("sysB")
    sp.add_argument("--witness", default="canonical")
    sp.add_argument("--levels", type=int, default=5)
    sp.add_argument("--grid", type=int, default=256)
    sp.add_argument("--tail-depth", type=int, default=6, help="tail depth of Markov set points put on the grid")
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_conjugacy)

    sp = sub.add_parser("inverse-limit", help="emptiness verdict and sample threads")
    sp.add_argument("system")
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--out", help="thread CSV path")
    common(sp, depth=10)
    sp.set_defaults(func=cmd_inverse_limit)

    sp = sub.add_parser("plot", help="graph samples of one bonding function as CSV")
    sp.add_argument("system")
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--points", "--samples", dest="points", type=int, default=100)
    sp.add_argument("--out")
    sp.add_argument("--decimals", type=int, default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_plot)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except InternalInvariantBreach as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return FAIL
    except (QMarkovError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
