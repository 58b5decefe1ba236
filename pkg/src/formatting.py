from src.curve_core import AffinePoint
from src.fp_arith import COUNTER_COLUMNS, FieldElement, OpCounter, fe_to_hex, parse_hex

INFINITY_TEXT = "infinity"


def format_hex(value):
    if value is None:
        return "N/A"
    return f"{value:x}"


def format_point(point: AffinePoint):
    if point is None or point.is_infinity:
        return INFINITY_TEXT
    return f"{fe_to_hex(point.x)},{fe_to_hex(point.y)}"


def format_x(x):
    if x is None:
        return INFINITY_TEXT
    return fe_to_hex(x) if isinstance(x, FieldElement) else format_hex(x)


def parse_point(text):
    """Inverse of format_point for finite points: "x,y" in hex."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected x,y in hex, got {text!r}")
    return parse_hex(parts[0]), parse_hex(parts[1])


def format_digits(digits):
    return " ".join(str(d) for d in digits)


def format_counts(ctr: OpCounter):
    return " ".join(f"{name}={getattr(ctr, name)}" for name in COUNTER_COLUMNS.values())


def format_ns(ns):
    if ns is None:
        return "N/A"
    if ns < 1_000:
        return f"{ns:.0f}ns"
    if ns < 1_000_000:
        return f"{ns / 1_000:.1f}us"
    return f"{ns / 1_000_000:.2f}ms"
