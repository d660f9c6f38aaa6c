import random
from fractions import Fraction

import pytest

from decparse import BINARY32, BINARY64, IeeeComponents, format_17, parse
from decparse.formats import bits_to_double, double_to_bits
from decparse.oracle import digits_to_int, exact_convert, exact_convert_bits, exact_parse_bits
from oracles import nearest32, nearest64


@pytest.mark.parametrize(
    "digits,q,bits",
    [
        ("15", -1, 0x3FF8000000000000),
        ("9007199254740993", 0, 0x4340000000000000),
        ("5", -324, 1),
        ("1", -400, 0),
        ("1", 400, 0x7FF0000000000000),
    ],
)
def test_examples(digits, q, bits):
    assert exact_convert_bits(False, digits, q) == bits


def test_smallest_subnormal_by_comparison():
    x = Fraction(5) * Fraction(10) ** -324
    tiny = Fraction(2) ** -1074
    assert abs(x - tiny) < abs(x - 0) and abs(x - tiny) < abs(x - 2 * tiny)
    assert nearest64(x) == 1


def test_value_preserving_rewrites():
    forms = ["15e-1", "1.5", "1.500", "0.15e1", "150e-2", "0000.00015e4"]
    assert {exact_parse_bits(f) for f in forms} == {0x3FF8000000000000}


def test_against_fraction_search():
    rng = random.Random(1)
    for _ in range(2_000):
        n = rng.randint(1, 30)
        digits = str(rng.randrange(10 ** (n - 1), 10**n))
        q = rng.randint(-350, 320)
        x = Fraction(int(digits)) * Fraction(10) ** q
        expect64 = nearest64(x) if x < 2**1025 else 0x7FF0000000000000
        assert exact_convert_bits(False, digits, q, BINARY64) == expect64
        if -80 <= q <= 60:
            assert exact_convert_bits(False, digits, q, BINARY32) == nearest32(x)


def test_long_digit_strings():
    digits = "1" + "0" * 5000
    assert digits_to_int(digits) == 10**5000
    assert exact_convert_bits(False, digits, -5000) == 0x3FF0000000000000
    assert exact_convert_bits(True, "0000", 5) == 1 << 63


def test_midpoints_go_to_even():
    rng = random.Random(2)
    for _ in range(10_000):
        bits = rng.randrange(1, 0x7FEFFFFFFFFFFFFF)
        lo = IeeeComponents.from_bits(bits)
        # exact midpoint between bits and bits+1
        a = Fraction(bits_to_double(bits))
        b = Fraction(bits_to_double(bits + 1))
        mid = (a + b) / 2
        num, den = mid.numerator, mid.denominator  # den is a power of two
        k = den.bit_length() - 1
        digits, q = str(num * 5**k), -k
        even = bits if bits % 2 == 0 else bits + 1
        assert exact_convert_bits(False, digits, q) == even
        assert lo.to_bits() == bits


def test_format_17_examples():
    one = IeeeComponents.from_bits(0x3FF0000000000000)
    assert format_17(one) == "1.0000000000000000e0"
    tiny = IeeeComponents.from_bits(1)
    assert exact_parse_bits(format_17(tiny)) == 1
    tenth = IeeeComponents.from_bits(double_to_bits(0.1))
    assert exact_parse_bits(format_17(tenth)) == 0x3FB999999999999A
    assert format_17(IeeeComponents.from_bits(1 << 63)) == "-0.0000000000000000e0"
    with pytest.raises(ValueError):
        format_17(IeeeComponents.from_bits(0x7FF0000000000000))


def test_format_17_round_trip_sample():
    rng = random.Random(3)
    for _ in range(20_000):
        bits = rng.getrandbits(64)
        if (bits >> 52) & 0x7FF == 0x7FF:
            continue
        text = format_17(IeeeComponents.from_bits(bits))
        assert len(text.lstrip("-").partition("e")[0].replace(".", "")) == 17
        assert exact_parse_bits(text) == bits
        assert parse(text).to_bits() == bits


def test_binary32_values_round_trip_through_17_digits():
    rng = random.Random(4)
    for _ in range(5_000):
        bits = rng.getrandbits(31)
        if bits >> 23 == 0xFF:
            continue
        text = format_17(IeeeComponents.from_bits(bits, BINARY32))
        assert exact_parse_bits(text, BINARY32) == bits


def test_exact_convert_components():
    c = exact_convert(True, "25", -1, BINARY32)
    assert c.to_float() == -2.5 and c.fmt is BINARY32


def test_rejects_bad_strings():
    with pytest.raises(ValueError):
        exact_parse_bits(".5")
