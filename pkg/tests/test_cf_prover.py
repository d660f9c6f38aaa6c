import json
import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from decparse.cf_prover import (
    HIGH,
    LOW,
    _denominators,
    brute_force_check,
    cf_expansion,
    check_power,
    convergents,
    is_convergent,
    lemma2_rescale,
    reports_to_json,
    residue,
    verify_all,
)
from decparse.formats import BINARY32, BINARY64
from decparse.pow5_table import EMBEDDED, PowerEntry
from oracles import legendre_samples


def legendre_bound(k: int, cap: int = 10) -> int:
    """Largest power of two b <= 2**cap with 2*b*(b-1) < 2**k."""
    b = 1 << cap
    while 2 * b * (b - 1) >= 1 << k:
        b >>= 1
    return b


# -- expansions and convergents


@pytest.mark.parametrize(
    "n,d,coeffs",
    [(1, 2, (0, 2)), (7, 3, (2, 3)), (1 << 127, 1 << 137, (0, 1024)), (7, 13, (0, 1, 1, 6)), (5, 1, (5,))],
)
def test_expansion_examples(n, d, coeffs):
    assert cf_expansion(n, d).coefficients == coeffs


def test_expansion_rejects_bad_input():
    with pytest.raises(ValueError):
        cf_expansion(1, 0)


def test_convergent_examples():
    from decparse.cf_prover import CFExpansion

    got = [(c.p, c.q_den) for c in convergents(CFExpansion(3, 7, (0, 2, 3)))]
    assert got == [(0, 1), (1, 2), (3, 7)]
    assert [(c.p, c.q_den) for c in convergents(cf_expansion(7, 3))] == [(2, 1), (7, 3)]


@given(st.integers(0, 1 << 200), st.integers(1, 1 << 200))
def test_reconstruction_and_canonical_form(n, d):
    exp = cf_expansion(n, d)
    assert exp.evaluate() == Fraction(n, d)
    assert exp.coefficients[0] >= 0 and all(a >= 1 for a in exp.coefficients[1:])
    if len(exp.coefficients) > 1:
        assert exp.coefficients[-1] >= 2


def test_determinant_gcd_and_last_convergent():
    rng = random.Random(1)
    for _ in range(10_000):
        n, d = rng.getrandbits(rng.randint(1, 140)), rng.getrandbits(rng.randint(1, 140)) or 1
        cs = convergents(cf_expansion(n, d))
        assert Fraction(cs[-1].p, cs[-1].q_den) == Fraction(n, d)
        for prev, cur in zip(cs, cs[1:]):
            assert cur.p * prev.q_den - prev.p * cur.q_den == (-1) ** (cur.index - 1)
        assert all(gcd(c.p, c.q_den) == 1 for c in cs)
        assert all(b.q_den > a.q_den for a, b in zip(cs[1:], cs[2:]))


# -- is_convergent and Legendre


def test_is_convergent_examples():
    assert is_convergent(1, 2, 7, 13)
    assert is_convergent(7, 13, 7, 13)
    assert is_convergent(2, 4, 7, 13)  # reduced before lookup
    assert not is_convergent(2, 3, 7, 13)


def test_legendre_property_sampled():
    n = 0
    for xn, xd, p, q in legendre_samples(3_000, 2):
        assert abs(Fraction(p, q) - Fraction(xn, xd)) < Fraction(1, 2 * q * q)
        assert is_convergent(p, q, xn, xd)
        n += 1
    assert n > 2_500


# -- residues and lemma 2


def test_residue_examples():
    assert residue(1 << 127, 2, 137) == 1 << 128
    assert residue(1 << 127, 1 << 10, 137) == 0
    rng = random.Random(3)
    for _ in range(1000):
        t, w = rng.getrandbits(128), rng.getrandbits(64)
        assert residue(t, w, 137) == t * w - ((t * w) >> 137 << 137)


def test_lemma2_examples():
    a, w = 1 << 127, 1 << 10
    assert (a * w) >> 137 == 1 and gcd(w, 2) == 2
    lhs, rhs = lemma2_rescale(a, w, 137)
    assert lhs == rhs == (a << 9) % (1 << 137) == 1 << 136
    lhs, rhs = lemma2_rescale(3, 7, 137)  # coprime, d = 1
    assert lhs == rhs == 21


@given(st.integers(1, (1 << 128) - 1), st.integers(1, (1 << 64) - 1))
def test_lemma2_property(a, w):
    lhs, rhs = lemma2_rescale(a, w, 137)
    assert lhs == rhs


def test_lemma2_large_gcd():
    rng = random.Random(4)
    for _ in range(2_000):
        # force d > 1: choose w and a so that 1 + floor(a*w/2**k) shares a factor with w
        d = rng.randrange(2, 1 << 16)
        w = d * rng.randrange(1, 1 << 40)
        n = d * rng.randrange(1, 1 << 40)
        a = ((n - 1) << 137) // w + 1
        lhs, rhs = lemma2_rescale(a, w, 137)
        assert lhs == rhs


# -- check_power


def test_check_power_q0_clear():
    assert check_power(PowerEntry(0, 1 << 127), 137) is None
    # every residue is a multiple of 2**127, max 2**137 - 2**127 < 2**137 - 2**64
    assert (1 << 137) - (1 << 127) < (1 << 137) - (1 << 64)


def test_check_power_rejects_outside_legendre_window():
    with pytest.raises(ValueError):
        check_power(12345, 20, 1 << 10)
    check_power(12345, 21, 1 << 10)  # fine


def test_brute_force_small_examples():
    assert brute_force_check(1 << 19, 20, 1 << 8) is None
    assert check_power(1 << 19, 20, 1 << 8) is None
    t = (1 << 20) - 1  # odd, residue at w=1 is 2**20 - 1 >= 2**20 - 2
    w = brute_force_check(t, 20, 2)
    assert w is not None and w.denom == 1
    assert brute_force_check((1 << 20) - 3, 20, 2) is None
    hit = check_power(t, 20, 2)
    assert hit is not None and hit.denom == 1


def test_adversarial_all_ones_entry():
    t = (1 << 128) - 1
    k, bound = 137, 1 << 64
    hit = check_power(t, k, bound)
    # downscaled analogue checked exhaustively
    small_t, small_k = (1 << 24) - 1, 33
    small_bound = legendre_bound(small_k, 12)
    fast = check_power(small_t, small_k, small_bound)
    slow = brute_force_check(small_t, small_k, small_bound)
    assert (fast is None) == (slow is None)
    if fast:
        assert fast.denom == slow.denom
    if hit is not None:
        assert residue(t, hit.denom, k) >= (1 << k) - bound


@pytest.mark.parametrize("side", [HIGH, LOW])
def test_convergent_method_equals_brute_force(side):
    rng = random.Random(5)
    verdicts = set()
    for _ in range(300):
        k = rng.randint(20, 24)
        t = rng.getrandbits(rng.randint(20, 24)) | 1 << 19
        bound = legendre_bound(k)
        fast = check_power(t, k, bound, side=side)
        slow = brute_force_check(t, k, bound, side=side)
        assert (fast is None) == (slow is None), (t, k, bound)
        if fast is not None:
            # the smallest violator is itself a reduced convergent denominator
            assert fast.denom == slow.denom
        verdicts.add(fast is None)
    assert verdicts == {True, False}


def test_lemma1_direction_on_small_instances():
    rng = random.Random(6)
    found = 0
    for _ in range(1000):
        k, gap = 22, 1 << 10  # 2 * gap * w < 2**k for every w < 2**10
        t = rng.getrandbits(24) | 1 << 23
        for w in range(1, 1 << 10):
            if residue(t, w, k) >= (1 << k) - gap:
                n = 1 + ((t * w) >> k)
                assert is_convergent(n, w, t, 1 << k)
                found += 1
    assert found > 100


def test_denominators_increase_and_stop():
    for entry in list(EMBEDDED.entries())[::37]:
        dens = list(_denominators(entry.value, 137, 1 << 64))
        assert dens and dens == sorted(set(dens))
        assert dens[-1] < 1 << 64


# -- verify_all


@pytest.fixture(scope="module")
def reports():
    return verify_all(EMBEDDED, BINARY64), verify_all(EMBEDDED, BINARY32)


def test_verify_all(reports):
    r64, r32 = reports
    assert r64.modulus_bits == 137 and r32.modulus_bits == 166
    for r in reports:
        assert r.all_clear and r.low_side_clear
        assert len(r.per_power) == 651
        assert [p.q for p in r.per_power] == list(range(-342, 309))
        assert all(p.convergents_examined > 0 for p in r.per_power)
        assert all(p.max_denominator < 1 << 64 for p in r.per_power)
        assert all(p.max_residue < (1 << r.modulus_bits) - (1 << 64) for p in r.per_power)


def test_verify_each_entry_with_check_power():
    for entry in EMBEDDED.entries():
        assert check_power(entry, 137) is None
        assert check_power(entry, 166) is None


def test_low_side_hits_only_at_exact_reciprocals():
    # for q in [-27, -1] the all-zeros pattern occurs, but only where 5**-q divides w,
    # i.e. for values the rounded-up entry still resolves exactly
    for q in range(-27, 0):
        hit = check_power(EMBEDDED[q], 137, side=LOW)
        assert hit is not None and hit.denom % 5**-q == 0


def test_report_json(reports):
    doc = json.loads(reports_to_json(reports))
    assert set(doc) == {"binary64", "binary32"}
    sec = doc["binary64"]
    assert sec["all_clear"] is True and sec["modulus_bits"] == 137
    assert sec["table_checksum"] == EMBEDDED.checksum()
    rec = sec["entries"][342]
    assert rec["q"] == 0 and rec["witness"] is None
    assert set(rec) >= {"q", "modulus_bits", "convergents_examined", "max_residue", "max_denominator", "witness"}
    int(rec["max_residue"], 16), int(rec["max_denominator"])


def test_synthetic_table_witness_is_reported():
    from decparse.pow5_table import PowerTable

    # T = 2**128 - 2**55 gives (T * 2**9) mod 2**137 = 2**137 - 2**64 exactly
    t = (1 << 128) - (1 << 55)
    assert residue(t, 1 << 9, 137) == (1 << 137) - (1 << 64)
    values = list(EMBEDDED.values)
    values[342] = t
    report = verify_all(PowerTable(values), BINARY64)
    assert not report.all_clear
    (w,) = report.witnesses
    assert w.q_power == 0 and w.denom <= 1 << 9 and w.margin_gap <= 1 << 64
