"""Certify that the truncated product never needs a fallback.

The fallback predicate for table entry T and normalized significand w is the
residue condition ``(T * w) mod 2**k >= 2**k - 2**64`` with k = 64 + margin
(137 for binary64, 166 for binary32).  Any such w makes ``n/w`` with
``n = 1 + floor(T*w / 2**k)`` lie within ``1/(2 w**2)`` of ``T / 2**k``, so by
Legendre's theorem ``n/w`` is a convergent; reducing it keeps the condition.
Hence scanning the convergent denominators below 2**64 is exhaustive.

Everything here is plain big-integer arithmetic, independent of the fast
conversion code it certifies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .formats import BINARY64, FloatFormat
from .pow5_table import EMBEDDED, PowerEntry, PowerTable

HIGH = "high"
LOW = "low"


@dataclass(frozen=True)
class CFExpansion:
    numerator: int
    denominator: int
    coefficients: tuple[int, ...]

    def evaluate(self) -> Fraction:
        """Fold the nested fraction back up (independent of the convergents)."""
        value = Fraction(self.coefficients[-1])
        for a in reversed(self.coefficients[:-1]):
            value = a + 1 / value
        return value


@dataclass(frozen=True)
class Convergent:
    index: int
    p: int
    q_den: int


@dataclass(frozen=True)
class ResidueWitness:
    q_power: int | None
    denom: int
    residue: int
    margin_gap: int
    gcd_d: int


@dataclass
class PowerResult:
    q: int
    modulus_bits: int
    convergents_examined: int
    max_residue: int
    max_denominator: int
    witness: ResidueWitness | None = None
    low_side_witness: ResidueWitness | None = None


@dataclass
class VerificationReport:
    target: str
    modulus_bits: int
    table_checksum: str
    per_power: list[PowerResult] = field(default_factory=list)
    low_side_checked: bool = False

    @property
    def all_clear(self) -> bool:
        return all(r.witness is None for r in self.per_power)

    @property
    def low_side_clear(self) -> bool:
        return all(r.low_side_witness is None for r in self.per_power)

    @property
    def witnesses(self) -> list[ResidueWitness]:
        return [r.witness for r in self.per_power if r.witness is not None]

    def summary(self) -> str:
        clear = sum(r.witness is None for r in self.per_power)
        line = f"{self.target}: {clear}/{len(self.per_power)} clear, k={self.modulus_bits}"
        if self.low_side_checked:
            line += ", low side " + ("clear" if self.low_side_clear else "NOT clear")
        return line

    def to_dict(self) -> dict:
        def witness(w):
            return None if w is None else {
                "q": w.q_power,
                "denominator": str(w.denom),
                "residue": f"{w.residue:X}",
                "margin_gap": str(w.margin_gap),
                "gcd": str(w.gcd_d),
            }

        return {
            "target": self.target,
            "modulus_bits": self.modulus_bits,
            "all_clear": self.all_clear,
            "low_side_checked": self.low_side_checked,
            "low_side_clear": self.low_side_clear,
            "table_checksum": self.table_checksum,
            "entries": [
                {
                    "q": r.q,
                    "modulus_bits": r.modulus_bits,
                    "convergents_examined": r.convergents_examined,
                    "max_residue": f"{r.max_residue:X}",
                    "max_denominator": str(r.max_denominator),
                    "witness": witness(r.witness),
                    "low_side_witness": witness(r.low_side_witness),
                }
                for r in self.per_power
            ],
        }


def cf_expansion(numerator: int, denominator: int) -> CFExpansion:
    if denominator <= 0 or numerator < 0:
        raise ValueError("need numerator >= 0 and denominator > 0")
    coeffs = []
    n, d = numerator, denominator
    while d:
        a, r = divmod(n, d)
        coeffs.append(a)
        n, d = d, r
    # Euclid's last quotient is >= 2 whenever there is more than one term
    return CFExpansion(numerator, denominator, tuple(coeffs))


def iter_convergents(coefficients):
    p_prev, q_prev, p, q = 0, 1, 1, 0  # p_{-2}, q_{-2}, p_{-1}, q_{-1}
    for i, a in enumerate(coefficients):
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        yield Convergent(i, p, q)


def convergents(exp: CFExpansion) -> list[Convergent]:
    return list(iter_convergents(exp.coefficients))


def is_convergent(p: int, q_den: int, numerator: int, denominator: int) -> bool:
    if q_den <= 0 or denominator <= 0:
        raise ValueError("denominators must be positive")
    g = gcd(p, q_den)
    p, q_den = p // g, q_den // g
    for c in iter_convergents(cf_expansion(numerator, denominator).coefficients):
        if c.q_den > q_den:
            return False
        if c.p == p and c.q_den == q_den:
            return True
    return False


def residue(t: int, w: int, modulus_bits: int) -> int:
    return (t * w) % (1 << modulus_bits)


def _witness(t, w, k, q_power):
    r = residue(t, w, k)
    n = 1 + ((t * w) >> k)
    return ResidueWitness(q_power, w, r, (1 << k) - r, gcd(w, n))


def _violates(r: int, k: int, gap: int, side: str) -> bool:
    if side == HIGH:
        return r >= (1 << k) - gap
    return r < gap


def check_power(
    entry: PowerEntry | int,
    modulus_bits: int = 137,
    denom_bound: int = 1 << 64,
    gap: int | None = None,
    side: str = HIGH,
) -> ResidueWitness | None:
    """First convergent denominator w < denom_bound violating the residue
    condition, or None (clear).

    ``gap`` defaults to ``denom_bound``: the high side asks for
    ``(T*w) mod 2**k >= 2**k - gap`` (low margin bits all ones), the low side
    for ``(T*w) mod 2**k < gap`` (all zeros, the hazard of a rounded-up
    entry).  Exhaustiveness needs ``2 * gap * (denom_bound - 1) < 2**k`` so
    every violator is within Legendre's 1/(2w**2) of ``T / 2**k``.
    """
    t, q_power = (entry.value, entry.q) if isinstance(entry, PowerEntry) else (entry, None)
    k = modulus_bits
    gap = denom_bound if gap is None else gap
    if 2 * gap * (denom_bound - 1) >= 1 << k:
        raise ValueError("denom_bound too large for the Legendre argument at this modulus")
    for w in _denominators(t, k, denom_bound):
        if _violates(residue(t, w, k), k, gap, side):
            return _witness(t, w, k, q_power)
    return None


def _denominators(t: int, k: int, bound: int):
    """Convergent denominators of t / 2**k below bound, strictly increasing."""
    last = 0
    for c in iter_convergents(cf_expansion(t, 1 << k).coefficients):
        if c.q_den >= bound:
            return
        if c.q_den > last:  # q_1 may equal q_0 = 1
            last = c.q_den
            yield c.q_den


def scan_power(entry: PowerEntry, fmt: FloatFormat = BINARY64, low_side: bool = False) -> PowerResult:
    """check_power with bookkeeping for the report."""
    k = fmt.modulus_bits
    bound = 1 << 64
    if 2 * bound * (bound - 1) >= 1 << k:
        raise ValueError("modulus too small")
    t = entry.value
    threshold = (1 << k) - bound
    result = PowerResult(entry.q, k, 0, -1, 0)
    for w in _denominators(t, k, bound):
        r = residue(t, w, k)
        result.convergents_examined += 1
        result.max_denominator = w
        result.max_residue = max(result.max_residue, r)
        if r >= threshold and result.witness is None:
            result.witness = _witness(t, w, k, entry.q)
        if low_side and r < bound and result.low_side_witness is None:
            result.low_side_witness = _witness(t, w, k, entry.q)
    return result


def brute_force_check(t: int, modulus_bits: int, denom_bound: int, gap: int | None = None,
                      side: str = HIGH) -> ResidueWitness | None:
    """Ground truth: try every w in [1, denom_bound)."""
    k = modulus_bits
    gap = denom_bound if gap is None else gap
    for w in range(1, denom_bound):
        if _violates(residue(t, w, k), k, gap, side):
            return _witness(t, w, k, None)
    return None


def lemma2_rescale(a: int, w: int, modulus_bits: int) -> tuple[int, int]:
    """Both sides of the rescaling identity for d = gcd(w, 1 + floor(a*w / 2**k)).

    lhs = (a * (w/d)) mod 2**k;  rhs = 2**k + ((a*w) mod 2**k - 2**k) / d.
    Raises if the division on the right is not exact.
    """
    if a <= 0 or w <= 0:
        raise ValueError("a and w must be positive")
    k = modulus_bits
    m = 1 << k
    d = gcd(w, 1 + ((a * w) >> k))
    lhs = (a * (w // d)) % m
    num = (a * w) % m - m
    if num % d:
        raise ArithmeticError("rescaled residue is not an integer")
    return lhs, m + num // d


def verify_all(table: PowerTable = EMBEDDED, fmt: FloatFormat = BINARY64,
               low_side: bool = True) -> VerificationReport:
    """Scan every entry; with ``low_side`` also certify rounded-up entries.

    The low-side hazard (product within 2**64 above a boundary) matters only
    for entries that over-approximate, i.e. q < -27; for -27 <= q < 55 the
    product is close enough to exact that hits are harmless.
    """
    report = VerificationReport(fmt.name, fmt.modulus_bits, table.checksum(), low_side_checked=low_side)
    for entry in table.entries():
        res = scan_power(entry, fmt, low_side=low_side and entry.q < -27)
        report.per_power.append(res)
    return report


def reports_to_json(reports) -> str:
    return json.dumps({r.target: r.to_dict() for r in reports}, indent=1)

