"""Command line front end: parse, verify, difftest, bench, dump-table.

Exit statuses: 0 success, 1 input error, 2 verification witness,
3 differential mismatch, 4 table integrity failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import bench, cf_prover, difftest
from .conversion import convert_bits_with_check
from .formats import BINARY32, BINARY64
from .pow5_table import EMBEDDED, generate_table
from .scanner import DecimalNumber, ScanError, scan_full

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_WITNESS = 2
EXIT_MISMATCH = 3
EXIT_TABLE = 4


def _describe(text: str) -> str:
    num = scan_full(text)
    b64, fired64 = convert_bits_with_check(num, BINARY64)
    b32, fired32 = convert_bits_with_check(num, BINARY32)
    sign = "-" if num.negative else "+"
    if isinstance(num, DecimalNumber):
        parts = f"sign={sign} w={num.w} q={num.q} truncated={str(num.truncated).lower()}"
    else:
        parts = f"sign={sign} zero"
    fired = str(fired64 or fired32).lower()
    return f"{text}\t{parts} f64=0x{b64:016X} f32=0x{b32:08X} check_fired={fired}"


def cmd_parse(args) -> int:
    inputs = args.numbers or [line.strip() for line in sys.stdin if line.strip()]
    status = EXIT_OK
    for text in inputs:
        try:
            print(_describe(text))
        except ScanError as exc:
            print(f"error: {text!r}: {exc}", file=sys.stderr)
            status = EXIT_INPUT
    return status


def cmd_verify(args) -> int:
    targets = {"f64": [BINARY64], "f32": [BINARY32], "both": [BINARY64, BINARY32]}[args.target]
    reports = [cf_prover.verify_all(EMBEDDED, fmt) for fmt in targets]
    for report in reports:
        print(report.summary())
        for w in report.witnesses:
            print(f"  WITNESS q={w.q_power} w={w.denom} residue=0x{w.residue:X} gap={w.margin_gap}")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(cf_prover.reports_to_json(reports))
    if not all(r.all_clear and r.low_side_clear for r in reports):
        return EXIT_WITNESS
    return EXIT_OK


def cmd_difftest(args) -> int:
    if args.count < 1:
        print("error: --count must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    extra = []
    if args.corpus:
        try:
            with open(args.corpus) as fh:
                extra = [line.strip() for line in fh if line.strip()]
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT

    def progress(n):
        if args.progress:
            print(f"  {n} strings checked", file=sys.stderr)

    result = difftest.run_difftest(args.count, args.seed, extra, jobs=args.jobs, progress=progress)
    print(f"checked {result.checked} strings (seed={args.seed}, random={args.count}) "
          f"against the exact oracle for binary64 and binary32")
    if result.mismatches:
        print(f"MISMATCH: {result.first_mismatch().reproduction()}")
        return EXIT_MISMATCH
    if result.check_firings:
        print(f"CHECK FIRED: {result.check_firings[0].reproduction()}")
        return EXIT_MISMATCH
    print("0 mismatches, fallback check never fired")
    return EXIT_OK


def cmd_bench(args) -> int:
    variants = [v.strip() for v in args.variant.split(",") if v.strip()]
    fmt = BINARY64 if args.target == "f64" else BINARY32
    try:
        results = bench.run_bench(args.dataset, variants, args.reps, fmt)
    except bench.DatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except bench.VariantDisagreement as exc:
        print(f"variants disagree, no timings reported: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"dataset {args.dataset}: {results[0].numbers_parsed} numbers, {results[0].bytes} bytes")
    for r in results:
        print(r.row())
    return EXIT_OK


def cmd_dump_table(args) -> int:
    regenerated = generate_table()
    if regenerated != EMBEDDED:
        bad = [q for q, (a, b) in enumerate(zip(regenerated.values, EMBEDDED.values), -342) if a != b]
        print(f"embedded table differs from regeneration at q={bad[:10]}", file=sys.stderr)
        return EXIT_TABLE
    text = EMBEDDED.dump()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {len(EMBEDDED)} entries, sha256 {EMBEDDED.checksum()}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="decparse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="show decomposition and encodings of number strings")
    p.add_argument("numbers", nargs="*", help="number strings (default: stdin, one per line)")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("verify", help="prove no table entry can trigger the fallback")
    p.add_argument("--target", choices=("f64", "f32", "both"), default="both")
    p.add_argument("--json", metavar="PATH", help="write the machine-readable report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("difftest", help="compare against the exact oracle")
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--corpus", metavar="PATH", help="extra strings, one per line")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_difftest)

    p = sub.add_parser("bench", help="throughput of parser variants on a dataset")
    p.add_argument("dataset")
    p.add_argument("--variant", default="no_check,with_check",
                   help="comma-separated subset of " + ",".join(bench.VARIANTS))
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--target", choices=("f64", "f32"), default="f64")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("dump-table", help="write the power-of-five table (q<TAB>hex)")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_dump_table)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
