"""Wall-clock throughput of the no-check, with-check and oracle parsers."""

from __future__ import annotations

import gc
import statistics
import time
from dataclasses import dataclass

from .conversion import convert_bits, convert_bits_with_check
from .formats import BINARY64, FloatFormat
from .oracle import exact_parse_bits
from .scanner import scan_full

VARIANTS = ("no_check", "with_check", "oracle")


class DatasetError(Exception):
    pass


class VariantDisagreement(Exception):
    pass


@dataclass(frozen=True)
class BenchResult:
    dataset: str
    variant: str
    numbers_parsed: int
    bytes: int
    seconds: float  # median over repetitions
    repetitions: int

    @property
    def numbers_per_second(self) -> float:
        return self.numbers_parsed / self.seconds

    @property
    def bytes_per_second(self) -> float:
        return self.bytes / self.seconds

    def row(self) -> str:
        return (f"{self.variant:<11} {self.numbers_parsed:>9} numbers  "
                f"{self.numbers_per_second / 1e6:8.4f} Mnum/s  "
                f"{self.bytes_per_second / 1e6:8.3f} MB/s  (median of {self.repetitions})")


def load_dataset(path) -> list[bytes]:
    try:
        with open(path, "rb") as fh:
            lines = [line.strip() for line in fh]
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    lines = [line for line in lines if line]
    if not lines:
        raise DatasetError(f"{path}: no numbers")
    return lines


def _no_check(lines, fmt):
    out = []
    append = out.append
    for line in lines:
        append(convert_bits(scan_full(line), fmt))
    return out


def _with_check(lines, fmt):
    out = []
    append = out.append
    fired = 0
    for line in lines:
        bits, hit = convert_bits_with_check(scan_full(line), fmt)
        fired += hit
        append(bits)
    if fired:
        raise VariantDisagreement(f"fallback check fired on {fired} lines")
    return out


def _oracle(lines, fmt):
    return [exact_parse_bits(line.decode("ascii"), fmt) for line in lines]


_RUNNERS = {"no_check": _no_check, "with_check": _with_check, "oracle": _oracle}


def check_agreement(lines, variants, fmt: FloatFormat = BINARY64):
    """Parse once per variant; raise unless every line agrees bit-exactly."""
    try:
        results = {v: _RUNNERS[v](lines, fmt) for v in variants}
    except ValueError as exc:
        raise DatasetError(f"parse failure: {exc}") from exc
    ref_name, ref = next(iter(results.items()))
    for name, res in results.items():
        for i, (a, b) in enumerate(zip(ref, res)):
            if a != b:
                raise VariantDisagreement(
                    f"line {i + 1} {lines[i]!r}: {ref_name}={a:#x} {name}={b:#x}")


def run_bench(path, variants=("no_check", "with_check"), reps: int = 5,
              fmt: FloatFormat = BINARY64, lines=None) -> list[BenchResult]:
    if reps < 3:
        raise ValueError("need at least 3 repetitions")
    unknown = set(variants) - set(VARIANTS)
    if unknown:
        raise ValueError(f"unknown variant(s): {', '.join(sorted(unknown))}")
    if lines is None:
        lines = load_dataset(path)
    check_agreement(lines, variants, fmt)
    nbytes = sum(len(line) + 1 for line in lines)
    timings = {v: [] for v in variants}
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(reps):
            # interleave variants so drift hits all of them alike
            for v in variants:
                t0 = time.perf_counter()
                _RUNNERS[v](lines, fmt)
                timings[v].append(time.perf_counter() - t0)
    finally:
        if gc_was_enabled:
            gc.enable()
    return [BenchResult(str(path), v, len(lines), nbytes, statistics.median(timings[v]), reps)
            for v in variants]
