"""Shared percentage / rounding helpers.

All printed percentages use round-half-away-from-zero to 2 decimals.
"""

from decimal import ROUND_HALF_UP, Decimal


def pct(numerator: float, denominator: float) -> float:
    """100 * numerator / denominator, with 0/0 (and x/0) defined as 0."""
    if denominator == 0:
        return 0.0
    return 100.0 * numerator / denominator


def round2(x: float) -> float:
    return float(Decimal(repr(float(x))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def fmt2(x: float) -> str:
    return f"{Decimal(repr(float(x))).quantize(Decimal('0.01'), rounding=ROUND_HALF_UP):.2f}"
