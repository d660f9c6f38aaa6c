"""Differential testing of the fast converter against the exact oracle.

Random strings come from ``random.Random`` (Mersenne Twister) seeded per
block of 100 000 strings with ``seed * 1_000_003 + block``, so the stream for
a given seed is the same whatever the number of worker processes.  String i
has ``i % 25 + 1`` significant digits (leading digit non-zero), a uniformly
placed decimal point, and a value exponent (``value = digits * 10**q``)
drawn uniformly from [-360, 320]; sign, exponent marker and fixed/scientific
notation are drawn per string.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .conversion import convert_bits, convert_bits_with_check
from .formats import BINARY32, BINARY64, IeeeComponents, bits_to_double, double_to_bits
from .oracle import exact_parse_bits, format_17
from .scanner import scan_full

BLOCK = 100_000
MAX_DIGITS = 25
Q_LOW, Q_HIGH = -360, 320
TARGETS = (BINARY64, BINARY32)


def _block_rng(seed: int, block: int) -> random.Random:
    return random.Random(seed * 1_000_003 + block)


def random_string(rng: random.Random, ndigits: int) -> str:
    digits = str(rng.randrange(10 ** (ndigits - 1), 10**ndigits))
    q = rng.randint(Q_LOW, Q_HIGH)
    sign = "-" if rng.getrandbits(1) else ""
    style = rng.randrange(4)
    if style == 3 and -40 <= q <= 30:
        if q >= 0:
            return sign + digits + "0" * q
        point = ndigits + q
        if point > 0:
            return f"{sign}{digits[:point]}.{digits[point:]}"
        return f"{sign}0.{'0' * -point}{digits}"
    point = rng.randint(1, ndigits)
    mantissa = digits if point == ndigits else f"{digits[:point]}.{digits[point:]}"
    exp = q + ndigits - point
    marker = "E" if style == 1 else "e"
    plus = "+" if style == 2 and exp >= 0 else ""
    return f"{sign}{mantissa}{marker}{plus}{exp}"


def random_strings(count: int, seed: int, start: int = 0):
    """Strings ``start .. start+count-1`` of the stream for ``seed``."""
    i = start
    end = start + count
    while i < end:
        block, offset = divmod(i, BLOCK)
        rng = _block_rng(seed, block)
        # advance to the offset within the block
        for j in range(block * BLOCK, block * BLOCK + offset):
            random_string(rng, j % MAX_DIGITS + 1)
        stop = min(end, (block + 1) * BLOCK)
        for j in range(i, stop):
            yield random_string(rng, j % MAX_DIGITS + 1)
        i = stop


# ---------------------------------------------------------------- corpus


def _exact_decimal(n: int, e: int) -> tuple[str, int]:
    """n * 2**e as (digit string, power of ten), exactly."""
    if e >= 0:
        return str(n << e), 0
    return str(n * 5**-e), e


def _sci(digits: str, exp: int) -> str:
    return f"{digits}e{exp}"


def _near(digits: str, exp: int, keep: int):
    """The exact value and its floor/ceiling at ``keep`` significant digits."""
    yield _sci(digits, exp)
    if len(digits) > keep:
        head = digits[:keep]
        shift = exp + len(digits) - keep
        yield _sci(head, shift)
        yield _sci(str(int(head) + 1), shift)


def _neighbour_midpoints(bits: int, fmt):
    """Exact midpoints between the value ``bits`` and both neighbours."""
    p = fmt.precision
    e = (bits >> fmt.mantissa_bits) & fmt.max_biased
    m = bits & ((1 << fmt.mantissa_bits) - 1)
    if e == fmt.max_biased:
        return
    if e:
        m |= 1 << fmt.mantissa_bits
    exp2 = max(e, 1) - fmt.bias - (p - 1)
    # value = m * 2**exp2; midpoints at (2m +- 1) * 2**(exp2 - 1)
    for mid in (2 * m + 1, 2 * m - 1):
        if mid > 0:
            yield _exact_decimal(mid, exp2 - 1)


def structured_corpus() -> list[str]:
    """Boundary values, ties, near-ties, subnormal edges and range clamps."""
    out = [
        "0", "-0", "0.000", "0e999999", "1", "-1", "1.5", "10", "3.1416", "-3.14E+12",
        "1e-343", "1e-342", "9e-343", "1e308", "1e309", "9e308", "1e-400", "1e400",
        "5e-324", "4e-324", "2e-324", "3e-324", "2.4703282292062327e-324",
        "2.4703282292062328e-324", "4.9406564584124654e-324",
        "2.2250738585072011e-308", "2.2250738585072012e-308", "2.2250738585072014e-308",
        "1.7976931348623157e308", "1.7976931348623158e308", "1.7976931348623159e308",
        "9007199254740991", "9007199254740992", "9007199254740993", "9007199254740995",
        "18446744073709551615", "18446744073709551616", "9999999999999999999",
        "10000000000000000000", "1e22", "1e23", "9007199254740993e-22",
        "16777217", "16777219", "3.4028235e38", "3.4028236e38", "3.40282357e38",
        "1.17549435e-38", "1.4e-45", "7e-46", "7.006492321624085e-46",
        "0.1", "0.2", "0.3", "123456789012345678901234567890",
        "12345678901234567890", "1234567890123456789", "0.0000000000000000000001",
        "1" * 40 + "e-40", "9" * 30, "4503599627370496.5", "4503599627370497.5",
        "2.225073858507201136057409796709131975934819546351645648e-308",
        "1.7976931348623157081452742373170435679807056752584499659891747e308",
    ]
    out += [f"1e{q}" for q in range(-345, 311)]
    out += [f"{d}e{q}" for d in ("9999999999999999999", "1844674407370955161") for q in range(-345, 311, 7)]

    rng = random.Random(20230101)
    # small-q exact ties routed through the product (q in [-17, 23])
    for p, extra in ((53, 12), (24, 41)):
        for j in range(200):
            odd = (1 << p) + 2 * rng.randrange(1 << 8) + 1
            for s in range(-(rng.randrange(extra + 1)), 0):
                digits, exp = _exact_decimal(odd << max(s, 0), min(s, 0))
                if len(digits) <= 19:
                    out.append(_sci(digits, exp))
            out.append(str(odd << rng.randrange(extra)))

    values64 = [1, 2, 0x000FFFFFFFFFFFFF, 0x0010000000000000, 0x7FEFFFFFFFFFFFFF, 0x3FF0000000000000]
    values64 += [double_to_bits(2.0**k) for k in range(-1074, 1024, 3)]
    values64 += [rng.getrandbits(63) for _ in range(2000)]
    values64 = [b for b in values64 if (b >> 52) & 0x7FF != 0x7FF]
    for bits in values64:
        v = IeeeComponents.from_bits(bits)
        out.append(format_17(v))
        out.append(repr(bits_to_double(bits)))
        for digits, exp in _neighbour_midpoints(bits, BINARY64):
            for keep in (17, 19):
                out.extend(_near(digits, exp, keep))

    values32 = [1, 2, 0x007FFFFF, 0x00800000, 0x7F7FFFFF, 0x3F800000]
    values32 += [rng.getrandbits(31) for _ in range(1000)]
    values32 = [b for b in values32 if (b >> 23) & 0xFF != 0xFF]
    for bits in values32:
        for digits, exp in _neighbour_midpoints(bits, BINARY32):
            for keep in (9, 19):
                out.extend(_near(digits, exp, keep))
    return list(dict.fromkeys(out))


# ---------------------------------------------------------------- runner


@dataclass(frozen=True)
class Mismatch:
    index: int
    text: str
    target: str
    fast: int | None
    exact: int | None
    detail: str

    def reproduction(self) -> str:
        fast = "error" if self.fast is None else f"{self.fast:#x}"
        exact = "error" if self.exact is None else f"{self.exact:#x}"
        return f"decparse parse -- {self.text!r}  # {self.target}: fast={fast} exact={exact} ({self.detail})"


@dataclass
class DiffResult:
    checked: int = 0
    check_firings: list[Mismatch] = field(default_factory=list)
    mismatches: list[Mismatch] = field(default_factory=list)

    def merge(self, other: DiffResult):
        self.checked += other.checked
        self.check_firings += other.check_firings
        self.mismatches += other.mismatches

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.check_firings

    def first_mismatch(self) -> Mismatch | None:
        return min(self.mismatches, key=lambda m: m.index, default=None)


def check_strings(texts, start: int = 0, keep: int = 10) -> DiffResult:
    """Compare fast, checked-fast and exact conversion of each string."""
    result = DiffResult()
    for i, text in enumerate(texts, start):
        try:
            num = scan_full(text)
        except ValueError as exc:
            result.mismatches.append(Mismatch(i, text, "scan", None, None, str(exc)))
            continue
        for fmt in TARGETS:
            bits, fired = convert_bits_with_check(num, fmt)
            plain = convert_bits(num, fmt)
            exact = exact_parse_bits(text, fmt)
            if bits != exact or plain != bits:
                if len(result.mismatches) < keep:
                    detail = "oracle disagrees" if bits != exact else "check variant disagrees"
                    result.mismatches.append(Mismatch(i, text, fmt.name, plain, exact, detail))
            if fired and len(result.check_firings) < keep:
                result.check_firings.append(Mismatch(i, text, fmt.name, bits, exact, "fallback check fired"))
        result.checked += 1
    return result


def _random_block(args) -> DiffResult:
    seed, start, count = args
    return check_strings(random_strings(count, seed, start), start)


def run_difftest(count: int, seed: int, extra=(), builtin_corpus: bool = True,
                 jobs: int = 1, progress=None) -> DiffResult:
    """Check ``count`` random strings plus the corpora; deterministic verdict."""
    total = DiffResult()
    corpus = (structured_corpus() if builtin_corpus else []) + list(extra)
    # corpus strings are indexed after the random stream
    total.merge(check_strings(corpus, start=count))
    chunks = [(seed, s, min(BLOCK, count - s)) for s in range(0, count, BLOCK)]
    if jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for res in pool.map(_random_block, chunks):
                total.merge(res)
                if progress:
                    progress(total.checked)
    else:
        for chunk in chunks:
            total.merge(_random_block(chunk))
            if progress:
                progress(total.checked)
    total.mismatches.sort(key=lambda m: m.index)
    total.check_firings.sort(key=lambda m: m.index)
    return total
