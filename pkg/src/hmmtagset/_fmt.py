from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction


def pct(value) -> str:
    """Render a percentage to two decimals, rounding half up; None -> '-'."""
    if value is None:
        return "-"
    if isinstance(value, Fraction):
        d = Decimal(value.numerator) / Decimal(value.denominator)
    else:
        d = Decimal(str(value))
    return str(d.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))
