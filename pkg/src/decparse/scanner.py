"""Split a decimal number string into sign, 64-bit significand and power of ten.

Grammar (ASCII only)::

    number   := sign? digits ('.' digits?)? exponent?
    exponent := ('e' | 'E') sign? digits

A leading '.', ``inf``/``nan`` and hex floats are rejected.  Scanning stops at
the first character that cannot extend the number; the result records how
many characters were consumed so callers can decide whether trailing input
is an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

MAX_DIGITS = 19
EXPONENT_LIMIT = (1 << 31) - 1

_NUMBER = re.compile(rb"([+-]?)([0-9]+)(?:\.([0-9]*))?(?:[eE]([+-]?)([0-9]+))?")


class ScanError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass(slots=True)
class DecimalNumber:
    """``(-1)**negative * w * 10**q``.

    When ``truncated`` is set, ``w`` holds only the leading 19 significant
    digits (``q`` compensates for the dropped ones) and ``digits`` keeps the
    full significant digit string, whose exact value is
    ``int(digits) * 10**(q - len(digits) + 19)``.
    """

    negative: bool
    w: int
    q: int
    truncated: bool = False
    digits: str = ""
    consumed: int = 0

    @property
    def exact_digits(self) -> tuple[str, int]:
        """(digit string, exponent) with no precision lost."""
        if self.truncated:
            return self.digits, self.q - (len(self.digits) - MAX_DIGITS)
        return str(self.w), self.q


@dataclass(slots=True)
class ZeroToken:
    negative: bool = False
    consumed: int = 0


def _as_bytes(text) -> bytes:
    if isinstance(text, (bytes, bytearray, memoryview)):
        return bytes(text)
    try:
        return text.encode("ascii")
    except UnicodeEncodeError as exc:
        raise ScanError("non-ASCII character", exc.start) from None


def scan(text) -> DecimalNumber | ZeroToken:
    """Scan the longest number prefix of ``text`` (str or bytes)."""
    data = _as_bytes(text)
    m = _NUMBER.match(data)
    if m is None:
        raise ScanError(*_diagnose(data))
    end = m.end()
    if end < len(data):
        nxt = data[end]
        if nxt in b"eE":
            # an exponent marker that did not get digits
            off = end + 1
            if off < len(data) and data[off] in b"+-":
                off += 1
            raise ScanError("malformed exponent", off)
        if nxt >= 0x80:
            raise ScanError("non-ASCII byte", end)

    sign, int_part, frac, exp_sign, exp_digits = m.groups()
    negative = sign == b"-"
    frac = frac or b""
    digits = (int_part + frac).lstrip(b"0")
    if not digits:
        return ZeroToken(negative, end)

    q = -len(frac)
    if exp_digits is not None:
        exp_digits = exp_digits.lstrip(b"0")
        if len(exp_digits) > 10:
            exp = EXPONENT_LIMIT
        else:
            exp = min(int(exp_digits or b"0"), EXPONENT_LIMIT)
        q += -exp if exp_sign == b"-" else exp

    n = len(digits)
    if n <= MAX_DIGITS:
        return DecimalNumber(negative, int(digits), q, False, "", end)
    return DecimalNumber(
        negative, int(digits[:MAX_DIGITS]), q + n - MAX_DIGITS, True, digits.decode("ascii"), end
    )


def scan_full(text) -> DecimalNumber | ZeroToken:
    """Like :func:`scan` but the whole input must be one number."""
    data = _as_bytes(text)
    result = scan(data)
    if result.consumed != len(data):
        raise ScanError("unexpected character", result.consumed)
    return result


def _diagnose(data: bytes) -> tuple[str, int]:
    if not data:
        return "empty input", 0
    i = 1 if data[0] in b"+-" else 0
    if i == len(data):
        return "sign without digits", i
    c = data[i]
    if c >= 0x80:
        return "non-ASCII byte", i
    return f"expected digit, found {chr(c)!r}", i
