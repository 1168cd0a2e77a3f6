"""
Exact rational helpers shared by the exponent engine.

Exponents, thresholds and interval endpoints are ``fractions.Fraction`` values
throughout; floats never enter the engine. Strings such as ``"19/9"`` or ``"2.25"``
are parsed exactly.
"""

from decimal import Decimal, localcontext
from fractions import Fraction
from typing import List, Union

from numerics.errors import DomainError

Rational = Fraction
RationalLike = Union[Fraction, int, str]

MAX_DIMENSION = 64


def to_rational(value: RationalLike, parameter: str = "alpha") -> Fraction:
    """
    Convert an int, Fraction or string ("p/q" or a finite decimal) to an exact Fraction.

    Floats are accepted through their shortest decimal repr, so 0.1 becomes 1/10.
    """
    if isinstance(value, bool):
        raise DomainError(f"{parameter} must be a number, got {value!r}", parameter)
    if isinstance(value, float):
        value = repr(value)
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise DomainError(f"cannot read {parameter}={value!r} as a rational: {e}", parameter)


def format_rational(value: Fraction) -> str:
    """Serialize as "p/q" in lowest terms (integers keep the "/1")."""
    return f"{value.numerator}/{value.denominator}"


def decimal_string(value: Fraction, digits: int = 12) -> str:
    """Decimal rendering rounded to the given number of significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits
        quotient = Decimal(value.numerator) / Decimal(value.denominator)
    return format(quotient, "f")


def check_dimension(d: int, minimum: int) -> int:
    if not isinstance(d, int) or isinstance(d, bool):
        raise DomainError(f"dimension must be an integer, got {d!r}", "d")
    if d < minimum:
        raise DomainError(f"dimension must be at least {minimum}, got {d}", "d")
    if d > MAX_DIMENSION:
        raise DomainError(f"dimension is capped at {MAX_DIMENSION}, got {d}", "d")
    return d


def check_alpha(d: int, alpha: RationalLike) -> Fraction:
    """Return alpha as a Fraction after checking 0 < alpha <= d."""
    alpha = to_rational(alpha)
    if not 0 < alpha <= d:
        raise DomainError(f"alpha must lie in (0, {d}], got {alpha}", "alpha")
    return alpha


def alpha_grid(start: RationalLike, end: RationalLike, step: RationalLike) -> List[Fraction]:
    """Rational grid start, start+step, ..., up to and including end when it lands on the grid."""
    start, end, step = to_rational(start), to_rational(end), to_rational(step, "step")
    if step <= 0:
        raise DomainError(f"grid step must be positive, got {step}", "step")
    if end < start:
        raise DomainError(f"grid end {end} is below its start {start}", "end")
    count = int((end - start) / step)
    return [start + k * step for k in range(count + 1)]


def parse_table(text: str) -> List[Fraction]:
    """Parse "start:end:step" into an alpha grid, e.g. "1/100:3:1/100"."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"table must be start:end:step, got {text!r}", "table")
    return alpha_grid(*parts)
