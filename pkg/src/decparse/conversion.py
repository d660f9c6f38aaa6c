"""Decimal -> IEEE-754 conversion through one 64x128-bit truncated product.

The significand ``w`` is normalized to 64 bits, multiplied by the table entry
for ``q``, and only the top 128 bits of the 192-bit product are kept.  The
high ``extract_bits`` of that product carry the binary significand plus a
round bit; no fallback path exists.  :func:`convert_with_check` additionally
evaluates the historical fallback predicate (all-ones low margin bits with q
outside [-27, 55]) and reports whether it would have fired.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formats import (
    BINARY64,
    FloatFormat,
    IeeeComponents,
    double_to_bits,
    signed_infinity,
    signed_zero,
    single_to_bits,
)
from .oracle import exact_convert_bits
from .pow5_table import EMBEDDED, Q_MAX, Q_MIN, PowerEntry
from .scanner import DecimalNumber, ZeroToken, scan_full

_T = EMBEDDED.values
_MASK64 = (1 << 64) - 1
_EXACT_Q_MIN = -27  # T[q] * w is exact enough that the check is moot
_EXACT_Q_MAX = 55
_LOG2_10_NUM = 217706  # floor(q * log2(10)) == (217706 * q) >> 16 for |q| <= 350

# 10**k exactly representable as a double for k <= 22
_POW10_DOUBLE = tuple(float(10**k) for k in range(23))


@dataclass(frozen=True)
class NormalizedSignificand:
    scaled_w: int
    shift: int


@dataclass(frozen=True)
class Product128:
    z: int

    @property
    def top_bit(self) -> int:
        return self.z >> 127


@dataclass(frozen=True)
class CheckedResult:
    result: IeeeComponents
    check_fired: bool


def floor_log2_pow10(q: int) -> int:
    return (_LOG2_10_NUM * q) >> 16


def normalize(w: int) -> NormalizedSignificand:
    if not 1 <= w < 1 << 64:
        raise ValueError("w must be in [1, 2**64)")
    shift = 64 - w.bit_length()
    return NormalizedSignificand(w << shift, shift)


def truncated_product(scaled_w: int, entry: PowerEntry | int) -> Product128:
    t = entry.value if isinstance(entry, PowerEntry) else entry
    return Product128((t * scaled_w) >> 64)


def extract_significand(product: Product128, fmt: FloatFormat = BINARY64) -> int:
    return product.z >> fmt.margin_bits


def fallback_condition(z: int, q: int, fmt: FloatFormat = BINARY64) -> bool:
    """The retired line-4 predicate: low margin bits all ones, q outside [-27, 55]."""
    mask = (1 << fmt.margin_bits) - 1
    return (z & mask) == mask and not _EXACT_Q_MIN <= q <= _EXACT_Q_MAX


def _fast_path_bits(negative: bool, w: int, q: int, fmt: FloatFormat):
    """Clinger's fast path, or None when w or 10**|q| is not exact in ``fmt``."""
    if w >= fmt.fast_path_max_w or not -fmt.fast_path_max_q <= q <= fmt.fast_path_max_q:
        return None
    x = float(w)
    x = x * _POW10_DOUBLE[q] if q >= 0 else x / _POW10_DOUBLE[-q]
    if negative:
        x = -x
    if fmt is BINARY64:
        return double_to_bits(x)
    # binary32 operands are exact in binary64 and 53 >= 2*24 + 2, so rounding
    # the double quotient/product to single is innocuous.
    return single_to_bits(x)


def clinger_fast_path(num: DecimalNumber, fmt: FloatFormat = BINARY64) -> IeeeComponents | None:
    if num.truncated:
        return None
    bits = _fast_path_bits(num.negative, num.w, num.q, fmt)
    return None if bits is None else IeeeComponents.from_bits(bits, fmt)


def _round_product(negative: bool, full: int, shift: int, q: int, fmt: FloatFormat) -> int:
    """Encode the value whose 192-bit approximation is ``full`` (= T[q] * w << shift)."""
    z = full >> 64
    top = z >> 127
    drop = fmt.margin_bits + top
    m = z >> drop  # precision + 1 bits, lowest is the round bit
    biased = floor_log2_pow10(q) + 63 + top - shift + fmt.bias
    sign = (1 << (fmt.width - 1)) if negative else 0

    if biased <= 0:
        # Subnormal: exact ties cannot occur here (w * 10**q has no 2**-1075
        # component for q >= -342), so round half up is exact.
        m >>= 1 - biased
        return sign | ((m + 1) >> 1)

    if m & 1:
        # Exact midpoints need an exact product: only while 5**|q| is small.
        # For q in [-27, -1] the rounded-up reciprocal adds < 2**64 to the
        # product, which never reaches z.
        tie = (
            _EXACT_Q_MIN <= q <= _EXACT_Q_MAX
            and z & ((1 << drop) - 1) == 0
            and (q < 0 or full & _MASK64 == 0)
        )
        if not (tie and not m & 2):
            m += 1
    m >>= 1
    if m >> fmt.precision:
        m >>= 1
        biased += 1
    if biased >= fmt.max_biased:
        return sign | (fmt.max_biased << fmt.mantissa_bits)
    return sign | (biased << fmt.mantissa_bits) | (m & ((1 << fmt.mantissa_bits) - 1))


def convert_parts_bits(negative: bool, w: int, q: int, fmt: FloatFormat = BINARY64) -> int:
    """Encoding of ``(-1)**negative * w * 10**q`` for ``0 <= w < 2**64``."""
    if w == 0 or q < Q_MIN:
        return signed_zero(negative, fmt)
    if q > Q_MAX:
        return signed_infinity(negative, fmt)
    bits = _fast_path_bits(negative, w, q, fmt)
    if bits is not None:
        return bits
    shift = 64 - w.bit_length()
    return _round_product(negative, _T[q - Q_MIN] * (w << shift), shift, q, fmt)


def convert_parts_bits_with_check(negative: bool, w: int, q: int, fmt: FloatFormat = BINARY64):
    """As :func:`convert_parts_bits`, plus whether the fallback predicate fired."""
    if w == 0 or q < Q_MIN:
        return signed_zero(negative, fmt), False
    if q > Q_MAX:
        return signed_infinity(negative, fmt), False
    bits = _fast_path_bits(negative, w, q, fmt)
    if bits is not None:
        return bits, False  # |q| <= 22 lies inside the exempt window
    shift = 64 - w.bit_length()
    full = _T[q - Q_MIN] * (w << shift)
    mask = (1 << fmt.margin_bits) - 1
    fired = ((full >> 64) & mask) == mask and not _EXACT_Q_MIN <= q <= _EXACT_Q_MAX
    return _round_product(negative, full, shift, q, fmt), fired


def convert_bits(num: DecimalNumber | ZeroToken, fmt: FloatFormat = BINARY64) -> int:
    if isinstance(num, ZeroToken):
        return signed_zero(num.negative, fmt)
    if num.truncated:
        if num.q < Q_MIN:
            return signed_zero(num.negative, fmt)
        if num.q > Q_MAX:
            return signed_infinity(num.negative, fmt)
        digits, exp = num.exact_digits
        return exact_convert_bits(num.negative, digits, exp, fmt)
    return convert_parts_bits(num.negative, num.w, num.q, fmt)


def convert_bits_with_check(num: DecimalNumber | ZeroToken, fmt: FloatFormat = BINARY64):
    if isinstance(num, ZeroToken):
        return signed_zero(num.negative, fmt), False
    if num.truncated:
        # the result comes from the exact path; the predicate is still
        # evaluated on the leading 19 digits
        fired = False
        if Q_MIN <= num.q <= Q_MAX:
            fired = convert_parts_bits_with_check(num.negative, num.w, num.q, fmt)[1]
        return convert_bits(num, fmt), fired
    return convert_parts_bits_with_check(num.negative, num.w, num.q, fmt)


def convert(num: DecimalNumber | ZeroToken, fmt: FloatFormat = BINARY64) -> IeeeComponents:
    return IeeeComponents.from_bits(convert_bits(num, fmt), fmt)


def convert_with_check(num: DecimalNumber | ZeroToken, fmt: FloatFormat = BINARY64) -> CheckedResult:
    bits, fired = convert_bits_with_check(num, fmt)
    return CheckedResult(IeeeComponents.from_bits(bits, fmt), fired)


def from_parts(negative: bool, w: int, q: int, fmt: FloatFormat = BINARY64) -> IeeeComponents:
    return IeeeComponents.from_bits(convert_parts_bits(negative, w, q, fmt), fmt)


def parse_bits(text, fmt: FloatFormat = BINARY64) -> int:
    return convert_bits(scan_full(text), fmt)


def parse(text, fmt: FloatFormat = BINARY64) -> IeeeComponents:
    """Convert a complete number string to ``fmt``; raises ScanError."""
    return IeeeComponents.from_bits(parse_bits(text, fmt), fmt)


def parse_float(text) -> float:
    return IeeeComponents.from_bits(parse_bits(text, BINARY64)).to_float()
