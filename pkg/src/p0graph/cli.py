"""Command-line front end.

Exit codes: 0 class is P0, 1 counterexample (or failing samples), 2
undecided, 3 input or usage error, 4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from .bcdigraph import DEFAULT_CYCLE_CAP, build_graph, dot_export, enumerate_simple_cycles
from .certify import CLASS_IS_P0, COUNTEREXAMPLE, certify, sample_products
from .documents import InputError, certificate_to_document, load_input, tool_version
from .errors import ConsistencyError
from .ratmat import cauchy_binet_minor, is_P0, principal_minors, product_chain

EXIT_P0 = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_UNDECIDED = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _nonneg(text):
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {n}")
    return n


def _positive(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {n}")
    return n


def _fmt_matrix(m, indent="  ") -> list[str]:
    cells = m.to_strings()
    width = max(len(c) for row in cells for c in row)
    return [indent + "[" + ", ".join(c.rjust(width) for c in row) + "]" for row in cells]


def _census_line(cycles) -> str:
    by_len = Counter(c.length for c in cycles)
    parts = ", ".join(f"{n} of length {length}" for length, n in sorted(by_len.items()))
    noun = "cycle" if len(cycles) == 1 else "cycles"
    return f"{len(cycles)} {noun}" + (f" ({parts})" if parts else "")


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_check(args, out) -> int:
    ms = load_input(args.input)
    cert = certify(ms, args.samples, args.seed, args.cycle_cap)
    shapes = ", ".join(f"{m.nrows}x{m.ncols}" for m in ms)
    print(f"factors: k={len(ms)}, shapes {shapes}", file=out)
    product = product_chain(ms)
    print("product of the given matrices:", file=out)
    for line in _fmt_matrix(product):
        print(line, file=out)
    minors = ", ".join(f"{a!r}: {v}" for a, v in principal_minors(product))
    print(f"principal minors: {minors}  ({'P0' if is_P0(product) else 'not P0'})", file=out)

    cycles = cert.cycle_inventory
    suffix = " [truncated at cap]" if cert.truncated else ""
    print(f"simple cycles: {_census_line(cycles)}{suffix}", file=out)
    for c in cycles:
        print(f"  {c}", file=out)

    if cert.verdict == CLASS_IS_P0:
        print("verdict: class_is_P0 (no e-cycles: every product in the class is a P0-matrix)", file=out)
        if cert.samples_drawn:
            print(f"samples: {cert.samples_passed}/{cert.samples_drawn} sampled products P0 (seed {args.seed})", file=out)
        code = EXIT_P0
    elif cert.verdict == COUNTEREXAMPLE:
        cx = cert.counterexample
        print("verdict: counterexample", file=out)
        print(f"e-cycle: {cx.ecycle}", file=out)
        print(f"alpha0: {cx.alpha0!r}", file=out)
        print("restricted factors (entries off the e-cycle set to zero):", file=out)
        for j, m in enumerate(cx.restricted):
            print(f" factor {j}:", file=out)
            for line in _fmt_matrix(m, "   "):
                print(line, file=out)
        print(f"restricted minor at {cx.alpha0!r}: {cx.restricted_minor}", file=out)
        print(f"witness factors (same sign patterns as the input, eps = {cx.epsilon}):", file=out)
        for j, m in enumerate(cx.witness):
            print(f" factor {j}:", file=out)
            for line in _fmt_matrix(m, "   "):
                print(line, file=out)
        print(f"witness minor at {cx.alpha0!r}: {cx.witness_minor}", file=out)
        code = EXIT_COUNTEREXAMPLE
    else:
        print(f"verdict: undecided (cycle cap {args.cycle_cap} reached before any e-cycle)", file=out)
        code = EXIT_UNDECIDED

    if args.json:
        doc = certificate_to_document(cert, args.seed, ms)
        _write(args.json, json.dumps(doc, indent=2) + "\n")
    return code


def cmd_cycles(args, out) -> int:
    ms = load_input(args.input)
    g = build_graph(ms)
    census = enumerate_simple_cycles(g, args.cycle_cap)
    for c in census:
        print(c, file=out)
    suffix = " [truncated at cap]" if census.truncated else ""
    print(_census_line(census) + suffix, file=out)
    if args.dot:
        _write(args.dot, dot_export(g, census.ecycles))
    return EXIT_UNDECIDED if census.truncated else 0


def cmd_verify(args, out) -> int:
    ms = load_input(args.input)
    passed = failed = cb_checked = 0
    for factors, product in sample_products(ms, args.samples, args.seed):
        for alpha, value in principal_minors(product):
            cb = cauchy_binet_minor(factors, alpha)
            if cb != value:
                raise ConsistencyError(f"Cauchy-Binet gives {cb} at {alpha!r}, direct minor {value}")
            cb_checked += 1
        if is_P0(product):
            passed += 1
        else:
            failed += 1
    total = passed + failed
    print(f"samples: {total} (seed {args.seed})", file=out)
    print(f"P0-pass: {passed}/{total}", file=out)
    print(f"P0-fail: {failed}/{total}", file=out)
    print(f"Cauchy-Binet cross-checks: {cb_checked} minors, all equal", file=out)
    return EXIT_COUNTEREXAMPLE if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="p0graph", description="P0 certification of products of qualitative classes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {tool_version()}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="certify the class product and print a report")
    p.add_argument("input")
    p.add_argument("--samples", type=_nonneg, default=0, help="random in-class products to test (default 0)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cycle-cap", type=_positive, default=DEFAULT_CYCLE_CAP)
    p.add_argument("--json", metavar="OUT", help="write the certificate document here")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cycles", help="list simple cycles with their parities")
    p.add_argument("input")
    p.add_argument("--cycle-cap", type=_positive, default=DEFAULT_CYCLE_CAP)
    p.add_argument("--dot", metavar="OUT", help="write the graph as Graphviz DOT")
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("verify", help="sample the class product and test each member")
    p.add_argument("input")
    p.add_argument("--samples", type=_nonneg, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
