"""Exact decimal -> binary conversion with big-integer arithmetic.

Slow and simple on purpose: the value is written as a ratio of integers,
scaled so the quotient has exactly ``precision`` bits, and rounded
to nearest-even from the remainder.  No floating-point operation appears
anywhere on this path.  It is the ground truth for differential testing
and the converter of record for inputs with more than 19 significant digits.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .formats import (
    BINARY64,
    FloatFormat,
    IeeeComponents,
    signed_infinity,
    signed_zero,
)

_CHUNK = 4000  # stays under CPython's int/str conversion digit limit


@lru_cache(maxsize=2048)
def _pow10(n: int) -> int:
    return 10**n


def digits_to_int(digits: str) -> int:
    if len(digits) <= _CHUNK:
        return int(digits)
    value = 0
    for i in range(0, len(digits), _CHUNK):
        chunk = digits[i : i + _CHUNK]
        value = value * _pow10(len(chunk)) + int(chunk)
    return value


def exact_convert_bits(negative: bool, digits: str, q: int, fmt: FloatFormat = BINARY64) -> int:
    """Correctly rounded encoding of ``int(digits) * 10**q``."""
    digits = digits.lstrip("0")
    if not digits:
        return signed_zero(negative, fmt)
    n = len(digits)
    # value < 10**(n+q) <= 1e-324 is below half the smallest binary64
    # subnormal (and far below binary32's); value >= 10**(n-1+q) >= 1e309
    # exceeds every finite value.  Avoids giant powers for absurd exponents.
    if n + q <= -324:
        return signed_zero(negative, fmt)
    if n - 1 + q >= 309:
        return signed_infinity(negative, fmt)

    a = digits_to_int(digits)
    b = 1
    if q >= 0:
        a *= _pow10(q)
    else:
        b = _pow10(-q)

    p = fmt.precision
    emin = 1 - fmt.bias  # exponent of the smallest normal
    # a/b lies in [2**e, 2**(e+1))
    e = a.bit_length() - b.bit_length()
    if (a >> e if e >= 0 else a << -e) < b:
        e -= 1
    quantum = max(e, emin) - (p - 1)  # exponent of the last significand bit
    if quantum >= 0:
        num, den = a, b << quantum
    else:
        num, den = a << -quantum, b
    m, r = divmod(num, den)
    if 2 * r > den or (2 * r == den and m & 1):
        m += 1
        if m == 1 << p:
            m >>= 1
            quantum += 1

    if quantum + p - 1 > fmt.bias:
        return signed_infinity(negative, fmt)
    sign = signed_zero(negative, fmt)
    if m >= 1 << (p - 1):
        biased = quantum + p - 1 + fmt.bias
        return sign | (biased << fmt.mantissa_bits) | (m - (1 << (p - 1)))
    return sign | m  # subnormal or zero; a carry to 2**(p-1) above is normal


def exact_convert(negative: bool, digits: str, q: int, fmt: FloatFormat = BINARY64) -> IeeeComponents:
    return IeeeComponents.from_bits(exact_convert_bits(negative, digits, q, fmt), fmt)


def format_17(value: IeeeComponents) -> str:
    """17 significant digits, ``[-]d.dddddddddddddddde<exp>``.

    Enough digits to round-trip any binary64 (hence any binary32) value.
    """
    if value.cls.name == "INFINITY":
        raise ValueError("cannot format an infinity")
    mantissa, _, exp = f"{value.to_float():.16e}".partition("e")
    return f"{mantissa}e{int(exp)}"


_STRTOD = re.compile(
    r"([+-]?)([0-9]+)(?:\.([0-9]*))?(?:[eE]([+-]?[0-9]+))?\Z", re.ASCII
)


def exact_parse_bits(text: str, fmt: FloatFormat = BINARY64) -> int:
    """String front end with its own grammar handling, separate from the scanner."""
    m = _STRTOD.match(text)
    if m is None:
        raise ValueError(f"invalid number string {text!r}")
    sign, int_part, frac, exp = m.groups()
    frac = frac or ""
    q = -len(frac)
    if exp:
        e = exp.lstrip("+-").lstrip("0")
        if len(e) > 12:  # hopelessly out of range either way
            e = "9" * 12
        q += int(e or "0") * (-1 if exp[0] == "-" else 1)
    return exact_convert_bits(sign == "-", int_part + frac, q, fmt)
