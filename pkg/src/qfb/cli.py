"""``qfb`` command line: build, verify and bench."""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from qfb.bench import DEFAULT_TIMEOUT, SUITES, format_table, resolve_source, run_one, save, sweep
from qfb.circuits import CircuitError, QasmError, RepeatedCircuit
from qfb.ddcore import DENSE_LIMIT
from qfb.ddops import DEFAULT_CT_LOG2, Package
from qfb.numerics import DEFAULT_EPS
from qfb.oracle import PRODUCT_LIMIT, dense_product
from qfb.strategies import STRATEGIES, BuildTimeout, NodeLimitExceeded, build

EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_LIMIT = 3

VERIFY_ATOL = 1e-9
VERIFY_ORACLE_LIMIT = 8


def _engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tolerance", type=float, default=DEFAULT_EPS, metavar="EPS",
                   help="complex-table tolerance (default %(default)g)")
    p.add_argument("--ct-size", type=int, default=DEFAULT_CT_LOG2, metavar="LOG2",
                   help="compute-table slots as a power of two (default 2**%(default)d)")
    p.add_argument("--timeout", type=float, default=None, metavar="SEC",
                   help="give up after this many seconds")


def _source_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("source", help="QASM file, qft:<n> or grover:<d>[:<marked>]")
    p.add_argument("--with-swaps", action="store_true", help="append the final swaps to QFT")
    p.add_argument("--iterations", type=int, default=None, metavar="N",
                   help="Grover repetition count (default floor(sqrt(2**d)))")
    p.add_argument("--marked", default=None, metavar="BITS", help="Grover marked element, MSB first")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfb", description="Decision-diagram construction of circuit unitaries.")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct one circuit and print its statistics as JSON")
    _source_flags(b)
    b.add_argument("-s", "--strategy", choices=STRATEGIES, default="pairwise")
    b.add_argument("--dump-matrix", action="store_true", help=f"print the dense matrix (n <= {DENSE_LIMIT})")
    b.add_argument("--dump-dd", action="store_true", help="print the node list as JSON")
    _engine_flags(b)

    v = sub.add_parser("verify", help="check all strategies against each other and the dense oracle")
    _source_flags(v)
    _engine_flags(v)

    r = sub.add_parser("bench", help="sweep a benchmark family")
    r.add_argument("suite", choices=SUITES)
    r.add_argument("--min", type=int, required=True, dest="lo")
    r.add_argument("--max", type=int, required=True, dest="hi")
    r.add_argument("--strategies", default=None, help="comma-separated list (default: all applicable)")
    r.add_argument("--output", default=None, metavar="PATH", help="write records as CSV (or JSON for *.json)")
    _engine_flags(r)
    r.set_defaults(timeout=DEFAULT_TIMEOUT)
    return parser


def _load(args):
    return resolve_source(args.source, with_swaps=args.with_swaps, iterations=args.iterations,
                          marked=args.marked)


def cmd_build(args) -> int:
    name, source = _load(args)
    rec = run_one(name, source, args.strategy, timeout=args.timeout, eps=args.tolerance,
                  ct_log2=args.ct_size)
    if rec.status != "ok":
        print(rec.to_json())
        print(f"qfb: build {rec.status} after {rec.wall_time:.2f} s", file=sys.stderr)
        return EXIT_LIMIT
    print(rec.to_json())
    if args.dump_dd or args.dump_matrix:
        # rebuild on a private engine; the record above came from a fresh one
        pkg = Package(source.n, eps=args.tolerance, ct_log2=args.ct_size)
        e, _ = build(pkg, source, args.strategy, track_sizes=False)
        if args.dump_dd:
            print(json.dumps({"root": [e[0].uid, [e[1].real, e[1].imag]], "nodes": pkg.dump(e)}))
        if args.dump_matrix:
            if source.n > DENSE_LIMIT:
                print(f"qfb: --dump-matrix needs n <= {DENSE_LIMIT}", file=sys.stderr)
                return EXIT_INPUT
            with np.printoptions(precision=6, suppress=True, linewidth=160, threshold=sys.maxsize):
                print(pkg.to_matrix(e))
    return 0


def cmd_verify(args) -> int:
    _, source = _load(args)
    strategies = list(STRATEGIES) if isinstance(source, RepeatedCircuit) else ["sequential", "pairwise"]
    pkg = Package(source.n, eps=args.tolerance, ct_log2=args.ct_size)
    deadline = None if args.timeout is None else time.perf_counter() + args.timeout
    edges = {}
    for s in strategies:
        edges[s], _ = build(pkg, source, s, deadline=deadline, track_sizes=False)
    ref = strategies[0]
    for s in strategies[1:]:
        if edges[s] != edges[ref]:
            print(f"qfb: {ref} and {s} produced different diagrams", file=sys.stderr)
            return EXIT_MISMATCH
    if source.n <= VERIFY_ORACLE_LIMIT and source.n <= PRODUCT_LIMIT:
        circuit = source.unrolled() if isinstance(source, RepeatedCircuit) else source
        err = float(np.abs(pkg.to_matrix(edges[ref]) - dense_product(circuit)).max())
        if err > VERIFY_ATOL:
            print(f"qfb: {ref} differs from the dense oracle by {err:.3g}", file=sys.stderr)
            return EXIT_MISMATCH
        print(f"ok: {', '.join(strategies)} agree; max deviation from dense oracle {err:.3g}")
    else:
        print(f"ok: {', '.join(strategies)} agree (n={source.n}, dense check skipped)")
    return 0


def cmd_bench(args) -> int:
    strategies = None
    if args.strategies:
        strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    if args.output:
        # fail before a long sweep rather than after it
        try:
            open(args.output, "a").close()
        except OSError as exc:
            print(f"qfb: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    records = sweep(args.suite, args.lo, args.hi, strategies, timeout=args.timeout,
                    eps=args.tolerance, ct_log2=args.ct_size,
                    progress=lambda r: print(f"{r.benchmark} {r.strategy}: {r.status}", file=sys.stderr))
    print(format_table(records))
    if args.output:
        save(records, args.output)
    return 0


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    handler = {"build": cmd_build, "verify": cmd_verify, "bench": cmd_bench}[args.command]
    try:
        return handler(args)
    except (QasmError, CircuitError, ValueError, OSError) as exc:
        print(f"qfb: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BuildTimeout, NodeLimitExceeded) as exc:
        print(f"qfb: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
