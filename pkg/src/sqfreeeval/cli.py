"""Command-line front end: ``isolate``, ``bound``, ``bench`` and ``verify``.

Exit status is 0 on success, 1 for invalid input, 2 when an internal
invariant is violated and 3 when the numeric root finder fails to converge.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys

from .amortize import StoppingModel, bound_report, integral_bound_G
from .bench import (
    FAMILIES,
    constant_slack,
    default_seed,
    family_generate,
    make_grid,
    run_benchmark,
    scaling_summary,
    write_outputs,
)
from .dyadic import parse_dyadic
from .isolator import Interval, benchmark_interval, isolate, isolate_benchmark, substitutions
from .oracle import ConvergenceError, sturm_count, sturm_isolate
from .polynomial import IntPolynomial, parse_polynomial, read_polynomial_file

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_ORACLE = 0, 1, 2, 3


def _load(text: str) -> list[IntPolynomial]:
    """A coefficient list or the path of a polynomial file."""
    text = text.strip()
    if os.path.isfile(text):
        polys = read_polynomial_file(text)
        if not polys:
            raise ValueError(f"no polynomials in {text}")
        return polys
    return [parse_polynomial(text)]


def _protect_negatives(argv: list[str]) -> list[str]:
    # argparse reads "-2,0,1" as an option; a leading space keeps it positional
    out = []
    for a in argv:
        if len(a) > 1 and a[0] == "-" and (a[1].isdigit() or a[1] == ","):
            a = " " + a
        out.append(a)
    return out


def _cmd_isolate(args) -> int:
    for f in _load(args.poly):
        if args.interval:
            lo, hi = (parse_dyadic(x.strip()) for x in args.interval)
            rep = isolate(f, Interval(lo, hi))
        else:
            rep = isolate_benchmark(f)
        if args.json:
            print(json.dumps({"polynomial": str(f), **rep.as_dict()}))
            continue
        print(f"{f.pretty()}: {rep.root_count} real roots")
        for r in rep.endpoint_roots + rep.point_roots:
            print(f"  point {r}")
        for J in rep.isolating_intervals:
            print(f"  interval {J}")
        print(f"  partition size {rep.stats.partition_size}, max depth {rep.stats.max_depth}")
    return EXIT_OK


def _cmd_bound(args) -> int:
    for f in _load(args.poly):
        rep = bound_report(f)
        if args.json:
            print(json.dumps({"polynomial": str(f), **rep.as_dict()}))
        else:
            print(f.pretty())
            for k, v in rep.as_dict().items():
                print(f"  {k} = {v:.6g}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    families = [s.strip() for s in args.families.split(",") if s.strip()]
    for fam in families:
        if fam not in FAMILIES:
            raise ValueError(f"unknown family {fam!r}")
    if args.dmax < 2:
        raise ValueError("--dmax must be at least 2")
    degrees = list(range(args.dmin, args.dmax + 1, args.dstep))
    grid = make_grid(families, degrees, args.L)
    if not grid:
        raise ValueError("empty benchmark grid")
    records = run_benchmark(grid, seed=args.seed, jobs=args.jobs)
    paths = write_outputs(records, args.out)
    violations = 0
    for r in records:
        limit = r.paper_constant_bound + constant_slack(r.degree_d)
        bad = []
        if not r.ok():
            bad.append("failed")
        else:
            if r.partition_size > limit:
                bad.append(f"exceeds constant bound {limit:.1f}")
            if not math.isnan(r.integral_bound) and r.partition_size > math.ceil(1.01 * r.integral_bound):
                bad.append(f"exceeds integral bound {r.integral_bound:.1f}")
        violations += bool(bad)
        flag = "  " + "; ".join(bad) if bad else ""
        print(f"{r.family:10s} d={r.degree_d:<3d} L={r.bits_L:<3d} #P={r.partition_size:<6d}{flag}")
    for fam, ratio in sorted(scaling_summary(records).items()):
        print(f"max #P/(d(L+ln d)) {fam}: {ratio:.3f}")
    print(f"slack +4d+16; outputs in {paths['csv']}, {paths['json']}, {paths['plot']}")
    return EXIT_INVARIANT if violations else EXIT_OK


def verify_polynomial(f: IntPolynomial) -> list[str]:
    """Isolation, Sturm cross-check and bound chain; returns the problems found."""
    problems = []
    rep = isolate_benchmark(f)
    g, _ = substitutions(f)
    expected = len(sturm_isolate(g, benchmark_interval(f)))
    if rep.root_count != expected:
        problems.append(f"root count {rep.root_count} != Sturm count {expected}")
    for J in rep.isolating_intervals:
        # open interval: subtract a root sitting on the right endpoint
        n = sturm_count(g, J) - (g(J.hi).is_zero())
        if n != 1:
            problems.append(f"interval {J} holds {n} roots")
    for r in rep.point_roots + rep.endpoint_roots:
        if not g(r).is_zero():
            problems.append(f"point {r} is not a root")
    if rep.stats.partition_size != rep.stats.bisections + 1:
        problems.append("partition size != bisections + 1")
    model = StoppingModel.from_polynomial(f)
    b = bound_report(f, model)
    bound = integral_bound_G(model)
    if rep.stats.partition_size > math.ceil(1.01 * bound):
        problems.append(f"#P {rep.stats.partition_size} exceeds integral bound {bound:.3f}")
    if not (b.integral_2_over_G <= 1.01 * b.integral_2_over_F <= 1.02 * b.closed_form_sum):
        problems.append(f"bound chain broken: {b}")
    return problems


def _cmd_verify(args) -> int:
    polys: list[IntPolynomial] = []
    if args.poly:
        polys.extend(_load(args.poly))
    if args.random:
        rng = random.Random(default_seed() if args.seed is None else args.seed)
        for _ in range(args.random):
            d, L = rng.randint(2, 12), rng.randint(2, 16)
            polys.append(family_generate("random", d, L, rng.getrandbits(64)))
    if not polys:
        raise ValueError("verify needs a polynomial or --random N")
    failed = 0
    for f in polys:
        problems = verify_polynomial(f)
        if problems:
            failed += 1
            print(f"FAIL {f}: " + "; ".join(problems))
    print(f"verified {len(polys) - failed}/{len(polys)} polynomials")
    return EXIT_INVARIANT if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sqfe", description="Exact real root isolation by subdivision.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("isolate", help="isolate the real roots of a polynomial")
    s.add_argument("poly", help="coefficients lowest degree first (e.g. -2,0,1) or a polynomial file")
    s.add_argument("--interval", nargs=2, metavar=("A", "B"), help="dyadic endpoints, e.g. -4 3*2^-1")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=_cmd_isolate)

    s = sub.add_parser("bound", help="print the amortization bounds")
    s.add_argument("poly")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=_cmd_bound)

    s = sub.add_parser("bench", help="run a benchmark grid")
    s.add_argument("--families", default=",".join(FAMILIES))
    s.add_argument("--dmin", type=int, default=4)
    s.add_argument("--dmax", type=int, default=16)
    s.add_argument("--dstep", type=int, default=4)
    s.add_argument("--L", type=int, nargs="+", default=[8, 16, 32])
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", default="bench_out")
    s.set_defaults(run=_cmd_bench)

    s = sub.add_parser("verify", help="cross-check isolation against the Sturm oracle and the bounds")
    s.add_argument("poly", nargs="?")
    s.add_argument("--random", type=int, default=0, metavar="N")
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(run=_cmd_verify)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_protect_negatives(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.run(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
