"""Exit criteria, each at its full stated scale and tolerance.

Prints one PASS/FAIL line per criterion in the terminal summary.  The
oracle-equivalence run (10**7 strings, both formats) takes several minutes
on one core; ``--jobs`` style sharding uses every available CPU.
"""

import os
import random
import time
from fractions import Fraction
from math import gcd
from pathlib import Path

import pytest

from conftest import ACCEPTANCE_LINES
from decparse import cli
from decparse.bench import run_bench
from decparse.cf_prover import (
    brute_force_check,
    check_power,
    is_convergent,
    lemma2_rescale,
    verify_all,
)
from decparse.conversion import floor_log2_pow10, parse_bits
from decparse.difftest import run_difftest
from decparse.formats import BINARY32, BINARY64, IeeeComponents
from decparse.oracle import exact_parse_bits, format_17
from decparse.pow5_table import EMBEDDED, generate_table, parse_dump
from oracles import legendre_samples

DATASET = Path(__file__).resolve().parents[1] / "data" / "canada_synthetic.txt"


@pytest.fixture
def record(request):
    def _record(passed: bool, detail: str):
        name = request.node.name.removeprefix("test_")
        line = f"{'PASS' if passed else 'FAIL'}  {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, detail

    return _record


@pytest.fixture(scope="module")
def difftest_result():
    t0 = time.perf_counter()
    result = run_difftest(10_000_000, seed=42, jobs=os.cpu_count() or 1)
    return result, time.perf_counter() - t0


def test_c01_no_fallback_verification(record, capsys):
    t0 = time.perf_counter()
    status = cli.main(["verify", "--target", "both"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out
    reports = [verify_all(EMBEDDED, BINARY64), verify_all(EMBEDDED, BINARY32)]
    clear = [sum(p.witness is None for p in r.per_power) for r in reports]
    ok = (status == 0 and clear == [651, 651] and [r.modulus_bits for r in reports] == [137, 166]
          and "651/651 clear, k=137" in out and elapsed < 120)
    record(ok, f"exit={status}, k=137 {clear[0]}/651 clear, k=166 {clear[1]}/651 clear, {elapsed:.2f}s")


def test_c02_prover_soundness_downscaled(record):
    rng = random.Random(2024)
    agree = witnesses = 0
    n = 200
    for _ in range(n):
        k = rng.randint(20, 24)
        t = rng.getrandbits(rng.randint(20, 24)) | (1 << 19)
        # largest power-of-two bound <= 2**10 inside Legendre's window
        bound = 1 << 10
        while 2 * bound * (bound - 1) >= 1 << k:
            bound >>= 1
        fast = check_power(t, k, bound)
        slow = brute_force_check(t, k, bound)
        same = (fast is None) == (slow is None) and (fast is None or fast.denom == slow.denom)
        agree += same
        witnesses += slow is not None
    record(agree == n and 0 < witnesses < n,
           f"{agree}/{n} instances agree ({witnesses} with a witness)")


def test_c03_oracle_equivalence(record, difftest_result):
    result, elapsed = difftest_result
    first = result.first_mismatch()
    detail = f"{result.checked} strings x 2 formats, {len(result.mismatches)} mismatches, {elapsed:.0f}s"
    if first:
        detail += f"; first: {first.reproduction()}"
    record(not result.mismatches and result.checked >= 10_000_000, detail)


def test_c04_check_never_fires(record, difftest_result):
    result, _ = difftest_result
    detail = f"{len(result.check_firings)} firings over {result.checked} strings"
    if result.check_firings:
        detail += f"; first: {result.check_firings[0].reproduction()}"
    record(not result.check_firings and result.checked >= 10_000_000, detail)


def test_c05_round_trip(record):
    rng = random.Random(5)
    done = failures = 0
    while done < 1_000_000:
        bits = rng.getrandbits(64)
        if (bits >> 52) & 0x7FF == 0x7FF:
            continue
        text = format_17(IeeeComponents.from_bits(bits))
        if parse_bits(text, BINARY64) != bits or exact_parse_bits(text, BINARY64) != bits:
            failures += 1
        done += 1
    record(failures == 0, f"{done} finite bit patterns, {failures} failures")


def test_c06_lemma2_identity(record):
    rng = random.Random(6)
    failures = forced = 0
    for i in range(100_000):
        if i % 2:
            a, w = rng.randrange(1, 1 << 128), rng.randrange(1, 1 << 64)
        else:
            # make d = gcd(w, 1 + floor(a*w/2**137)) large
            d = rng.randrange(2, 1 << 20)
            w = d * rng.randrange(1, (1 << 64) // d)
            n = d * rng.randrange(1, 1 << 40)
            a = ((n - 1) << 137) // w + 1
            forced += gcd(w, 1 + ((a * w) >> 137)) > 1
        lhs, rhs = lemma2_rescale(a, w, 137)
        failures += lhs != rhs
    record(failures == 0, f"100000 pairs at k=137 ({forced} with d > 1), {failures} failures")


def test_c07_legendre_property(record):
    failures = done = 0
    for xn, xd, p, q in legendre_samples(20_000, 7):
        assert abs(Fraction(p, q) - Fraction(xn, xd)) < Fraction(1, 2 * q * q)
        failures += not is_convergent(p, q, xn, xd)
        done += 1
        if done == 10_000:
            break
    record(done == 10_000 and failures == 0, f"{done} pairs, {failures} failures")


def test_c08_exponent_identity(record):
    bad = []
    for q in range(-350, 351):
        # floor(q * log2(10)) from exact integer powers
        exact = (10**q).bit_length() - 1 if q >= 0 else -((10**-q).bit_length())
        if (217706 * q) >> 16 != exact or floor_log2_pow10(q) != exact:
            bad.append(q)
    record(not bad, f"701 exponents checked, mismatches at {bad[:5]}")


def test_c09_table_integrity(record, tmp_path, capsys):
    path = tmp_path / "table.txt"
    status = cli.main(["dump-table", "--out", str(path)])
    capsys.readouterr()
    dumped = parse_dump(path.read_text())
    regenerated = generate_table()
    same = sum(a == b for a, b in zip(dumped.values, regenerated.values))
    ok = (status == 0 and same == 651 and dumped == EMBEDDED
          and dumped[0] == 1 << 127 and dumped[1] == 5 << 125)
    record(ok, f"exit={status}, {same}/651 entries match regeneration, q=0 and q=1 closed forms")


def test_c10_performance_direction(record):
    results = run_bench(DATASET, ("no_check", "with_check"), reps=5)
    by = {r.variant: r for r in results}
    ratio = by["no_check"].numbers_per_second / by["with_check"].numbers_per_second
    record(by["no_check"].numbers_parsed >= 100_000 and ratio >= 0.98,
           f"{by['no_check'].numbers_parsed} lines, no_check/with_check throughput = {ratio:.3f} "
           f"({by['no_check'].numbers_per_second:,.0f} vs {by['with_check'].numbers_per_second:,.0f} num/s)")
