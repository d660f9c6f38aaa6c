"""128-bit truncated powers of five and rounded-up reciprocals, q in [-342, 308].

Entries are normalized so the most significant bit is set.  Positive powers
are truncated (exact while 5**q fits in 128 bits, i.e. q <= 55); negative
powers hold the ceiling of 2**(127 + bitlen(5**-q)) / 5**-q.

The table ships precomputed in ``_pow5_data``; :func:`generate_table` rebuilds
it from scratch so the embedded copy can be audited.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from ._pow5_data import POW5_128

Q_MIN = -342
Q_MAX = 308
TABLE_SIZE = Q_MAX - Q_MIN + 1


@dataclass(frozen=True)
class PowerEntry:
    q: int
    value: int

    def hex(self) -> str:
        return f"{self.value:032X}"


class PowerTable:
    """Immutable q -> 128-bit entry mapping; index by ``table[q]``."""

    __slots__ = ("_values",)

    def __init__(self, values):
        values = tuple(values)
        if len(values) != TABLE_SIZE:
            raise ValueError(f"expected {TABLE_SIZE} entries, got {len(values)}")
        self._values = values

    def __len__(self):
        return TABLE_SIZE

    def __getitem__(self, q: int) -> int:
        if not Q_MIN <= q <= Q_MAX:
            raise IndexError(f"q={q} outside [{Q_MIN}, {Q_MAX}]")
        return self._values[q - Q_MIN]

    def __eq__(self, other):
        return isinstance(other, PowerTable) and self._values == other._values

    def __hash__(self):
        return hash(self._values)

    @property
    def values(self) -> tuple[int, ...]:
        """Raw entries in ascending q order (index 0 is q=-342)."""
        return self._values

    def entries(self):
        for i, v in enumerate(self._values):
            yield PowerEntry(Q_MIN + i, v)

    def dump(self) -> str:
        return "".join(f"{e.q}\t{e.hex()}\n" for e in self.entries())

    def checksum(self) -> str:
        return hashlib.sha256(self.dump().encode("ascii")).hexdigest()


def generate_entry(q: int) -> PowerEntry:
    if not Q_MIN <= q <= Q_MAX:
        raise ValueError(f"q={q} outside [{Q_MIN}, {Q_MAX}]")
    if q >= 0:
        power = 5**q
        shift = 128 - power.bit_length()
        value = power << shift if shift >= 0 else power >> -shift
    else:
        power = 5**-q
        numerator = 1 << (127 + power.bit_length())
        value = -(-numerator // power)
    return PowerEntry(q, value)


def generate_table() -> PowerTable:
    return PowerTable(generate_entry(q).value for q in range(Q_MIN, Q_MAX + 1))


def lookup(table: PowerTable, q: int) -> PowerEntry:
    return PowerEntry(q, table[q])


def parse_dump(text: str) -> PowerTable:
    """Inverse of :meth:`PowerTable.dump`; validates the q column."""
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        q_text, _, hex_text = line.partition("\t")
        if int(q_text) != Q_MIN + lineno - 1 or len(hex_text) != 32:
            raise ValueError(f"malformed table dump at line {lineno}: {line!r}")
        values.append(int(hex_text, 16))
    return PowerTable(values)


def render_module(table: PowerTable) -> str:
    lines = [
        '"""Generated by tools/regen_table.py; do not edit."""',
        "",
        "# fmt: off",
        "POW5_128 = (",
    ]
    lines += [f"    0x{v:032X},  # {q}" for q, v in ((e.q, e.value) for e in table.entries())]
    lines += [")", ""]
    return "\n".join(lines)


EMBEDDED = PowerTable(POW5_128)
