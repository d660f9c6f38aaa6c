"""IEEE-754 binary32/binary64 format parameters and component encoding."""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field


@dataclass(frozen=True)
class FloatFormat:
    """Target format plus the margin split used by the 128-bit product.

    ``extract_bits`` high bits of the truncated product feed the significand
    (one guard bit for rounding, one for a possible leading zero); the
    remaining ``margin_bits`` are the slack the fallback check inspects.
    """

    name: str
    mantissa_bits: int  # explicit significand bits (no hidden bit)
    exponent_bits: int
    extract_bits: int
    margin_bits: int
    fast_path_max_w: int  # w must be strictly below this for the fast path
    fast_path_max_q: int
    tie_q_min: int  # exact midpoints only exist for q in [tie_q_min, tie_q_max]
    tie_q_max: int

    # derived, filled in by __post_init__
    precision: int = field(init=False, repr=False)
    bias: int = field(init=False, repr=False)
    max_biased: int = field(init=False, repr=False)
    width: int = field(init=False, repr=False)

    def __post_init__(self):
        if self.extract_bits + self.margin_bits != 128:
            raise ValueError("extract_bits + margin_bits must equal 128")
        derived = {
            "precision": self.mantissa_bits + 1,
            "bias": (1 << (self.exponent_bits - 1)) - 1,
            "max_biased": (1 << self.exponent_bits) - 1,
            "width": 1 + self.exponent_bits + self.mantissa_bits,
        }
        for name, value in derived.items():
            object.__setattr__(self, name, value)

    @property
    def modulus_bits(self) -> int:
        """k in the residue condition: 64 low product bits plus the margin."""
        return 64 + self.margin_bits


# MarginConfig in the algorithm's vocabulary; the format carries it.
MarginConfig = FloatFormat

BINARY64 = FloatFormat("binary64", 52, 11, 55, 73, 1 << 53, 22, -4, 23)
BINARY32 = FloatFormat("binary32", 23, 8, 26, 102, 1 << 24, 10, -17, 10)

FORMATS = {"f64": BINARY64, "f32": BINARY32, "binary64": BINARY64, "binary32": BINARY32}


class FloatClass(enum.Enum):
    ZERO = "zero"
    SUBNORMAL = "subnormal"
    NORMAL = "normal"
    INFINITY = "infinity"


@dataclass(frozen=True)
class IeeeComponents:
    negative: bool
    cls: FloatClass
    biased_exponent: int
    significand: int
    fmt: FloatFormat = BINARY64

    def __post_init__(self):
        fmt = self.fmt
        e, m = self.biased_exponent, self.significand
        if not 0 <= m < (1 << fmt.mantissa_bits) or not 0 <= e <= fmt.max_biased:
            raise ValueError(f"field out of range for {fmt.name}: e={e} m={m}")
        if self.cls is not _classify(e, m, fmt):
            raise ValueError(f"class {self.cls.value} inconsistent with e={e} m={m}")

    def to_bits(self) -> int:
        fmt = self.fmt
        sign = (1 << (fmt.width - 1)) if self.negative else 0
        return sign | (self.biased_exponent << fmt.mantissa_bits) | self.significand

    @classmethod
    def from_bits(cls, bits: int, fmt: FloatFormat = BINARY64) -> IeeeComponents:
        if not 0 <= bits < (1 << fmt.width):
            raise ValueError(f"{bits:#x} does not fit {fmt.name}")
        m = bits & ((1 << fmt.mantissa_bits) - 1)
        e = (bits >> fmt.mantissa_bits) & fmt.max_biased
        if e == fmt.max_biased and m:
            raise ValueError("NaN encodings are not representable")
        return cls(bool(bits >> (fmt.width - 1)), _classify(e, m, fmt), e, m, fmt)

    def to_float(self) -> float:
        """Native float value (binary32 values widen exactly)."""
        if self.fmt is BINARY64:
            return bits_to_double(self.to_bits())
        return bits_to_single(self.to_bits())

    def hex(self) -> str:
        return f"0x{self.to_bits():0{self.fmt.width // 4}X}"


def _classify(e: int, m: int, fmt: FloatFormat) -> FloatClass:
    if e == 0:
        return FloatClass.SUBNORMAL if m else FloatClass.ZERO
    if e == fmt.max_biased:
        return FloatClass.INFINITY  # NaN rejected by callers
    return FloatClass.NORMAL


_D = struct.Struct("<d")
_F = struct.Struct("<f")


def double_to_bits(x: float) -> int:
    return int.from_bytes(_D.pack(x), "little")


def bits_to_double(bits: int) -> float:
    return _D.unpack(bits.to_bytes(8, "little"))[0]


def single_to_bits(x: float) -> int:
    """Round a Python float to binary32 (nearest-even) and return its encoding."""
    return int.from_bytes(_F.pack(x), "little")


def bits_to_single(bits: int) -> float:
    return _F.unpack(bits.to_bytes(4, "little"))[0]


def signed_zero(negative: bool, fmt: FloatFormat) -> int:
    return (1 << (fmt.width - 1)) if negative else 0


def signed_infinity(negative: bool, fmt: FloatFormat) -> int:
    return signed_zero(negative, fmt) | (fmt.max_biased << fmt.mantissa_bits)
