"""Correctly rounded decimal -> binary32/binary64 parsing without a fallback path."""

from .conversion import (
    convert,
    convert_bits,
    convert_with_check,
    from_parts,
    parse,
    parse_bits,
    parse_float,
)
from .formats import BINARY32, BINARY64, FloatClass, FloatFormat, IeeeComponents
from .oracle import exact_convert, format_17
from .scanner import DecimalNumber, ScanError, ZeroToken, scan, scan_full

__all__ = [
    "BINARY32",
    "BINARY64",
    "DecimalNumber",
    "FloatClass",
    "FloatFormat",
    "IeeeComponents",
    "ScanError",
    "ZeroToken",
    "convert",
    "convert_bits",
    "convert_with_check",
    "exact_convert",
    "format_17",
    "from_parts",
    "parse",
    "parse_bits",
    "parse_float",
    "scan",
    "scan_full",
]
