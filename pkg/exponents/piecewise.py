"""
Piecewise-Affine Exponent Module

Exact piecewise-affine functions of alpha for a fixed dimension d. Every exponent
curve of the engine (decay exponents, restriction exponents, induction exponents
and the planar decay table) is one of these.

Key Features:
- Half-open pieces (left, right] with rational endpoints and affine values
- Unambiguous evaluation: a shared endpoint belongs to the piece on its left
- Exact continuity check at every interior breakpoint
- Sampling of the curve on a rational grid for tables and plots

Dependencies:
- fractions: For exact slopes, intercepts and endpoints
- numerics.errors: For domain violations
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from exponents.rational import RationalLike, to_rational
from numerics.errors import DomainError


@dataclass(frozen=True)
class Piece:
    """Affine map alpha -> slope * alpha + intercept on the interval (left, right]."""

    left: Fraction
    right: Fraction
    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        if not self.left < self.right:
            raise DomainError(f"empty piece ({self.left}, {self.right}]", "interval")

    def contains(self, alpha: Fraction) -> bool:
        return self.left < alpha <= self.right

    def value(self, alpha: Fraction) -> Fraction:
        return self.slope * alpha + self.intercept


class PiecewiseExponent:
    """
    Contiguous list of pieces covering (pieces[0].left, pieces[-1].right].

    Example:
        >>> curve = PiecewiseExponent(3, [Piece(Fraction(0), Fraction(2), Fraction(2, 3), Fraction(0)),
        ...                              Piece(Fraction(2), Fraction(3), Fraction(0), Fraction(4, 3))])
        >>> curve(2)
        Fraction(4, 3)
    """

    def __init__(self, d: int, pieces: Sequence[Piece], name: str = ""):
        if not pieces:
            raise DomainError("a piecewise exponent needs at least one piece", "pieces")
        for before, after in zip(pieces, pieces[1:]):
            if before.right != after.left:
                raise DomainError(
                    f"pieces must be contiguous, found a break between {before.right} and {after.left}",
                    "pieces",
                )
        self.d = d
        self.pieces: Tuple[Piece, ...] = tuple(pieces)
        self.name = name

    @property
    def domain(self) -> Tuple[Fraction, Fraction]:
        return self.pieces[0].left, self.pieces[-1].right

    @property
    def breakpoints(self) -> List[Fraction]:
        """Interior junctions, in increasing order."""
        return [piece.right for piece in self.pieces[:-1]]

    def piece_at(self, alpha: RationalLike) -> Piece:
        alpha = to_rational(alpha)
        for piece in self.pieces:
            if piece.contains(alpha):
                return piece
        low, high = self.domain
        raise DomainError(f"alpha={alpha} lies outside ({low}, {high}]", "alpha")

    def __call__(self, alpha: RationalLike) -> Fraction:
        alpha = to_rational(alpha)
        return self.piece_at(alpha).value(alpha)

    def right_limit(self, breakpoint: Fraction) -> Fraction:
        """Value of the piece starting at the breakpoint, extended to its left endpoint."""
        for piece in self.pieces:
            if piece.left == breakpoint:
                return piece.value(breakpoint)
        raise DomainError(f"{breakpoint} is not a breakpoint of {self.name or 'the curve'}", "alpha")

    def discontinuities(self) -> List[Fraction]:
        return [
            before.right
            for before, after in zip(self.pieces, self.pieces[1:])
            if before.value(before.right) != after.value(after.left)
        ]

    def is_continuous(self) -> bool:
        return not self.discontinuities()

    def sample(self, alphas: Iterable[RationalLike]) -> List[Tuple[Fraction, Fraction]]:
        return [(to_rational(a), self(a)) for a in alphas]

    def __repr__(self) -> str:
        body = ", ".join(
            f"({p.left}, {p.right}]: {p.slope}*a + {p.intercept}" for p in self.pieces
        )
        return f"PiecewiseExponent(d={self.d}, {self.name or 'curve'}: {body})"


def affine(left, right, slope, intercept) -> Piece:
    """Shorthand taking any rational-like arguments."""
    return Piece(
        to_rational(left, "left"),
        to_rational(right, "right"),
        to_rational(slope, "slope"),
        to_rational(intercept, "intercept"),
    )
