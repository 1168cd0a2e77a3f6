"""
Exponent Formulas Module

Exact evaluation of the decay, restriction and induction exponents of the weighted
restriction estimates, their thresholds, and the comparison with earlier bounds.

Key Features:
- Harmonic tails S_l^d and the sharp threshold #_d
- Decay lower bounds beta (d = 3 three-piece formula, d >= 4 max of two bounds)
- Restriction exponents gamma^0_d and the broad-norm exponent gamma_d
- Induction exponents gamma_m as closed forms and as the recursion they satisfy
- Distance-set thresholds from the Mattila criterion, solved exactly
- Prior decay bounds on their stated ranges only (absent elsewhere)
- Table rows feeding the command-line CSV

Dependencies:
- fractions: For exact arithmetic (no floating point anywhere in this module)
- exponents.piecewise: For the piecewise-affine curves
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional

from exponents.piecewise import Piece, PiecewiseExponent
from exponents.rational import RationalLike, check_alpha, check_dimension, to_rational
from numerics.errors import DomainError

logger = logging.getLogger(__name__)

F = Fraction
HALF = F(1, 2)
QUARTER = F(1, 4)


def harmonic_sum(l: int, d: int) -> Fraction:
    """
    Tail of the harmonic series, 1/l + 1/(l+1) + ... + 1/d, and 0 when l > d.

    Example:
        >>> harmonic_sum(4, 5)
        Fraction(9, 20)
    """
    if l < 1 or d < 1:
        raise DomainError(f"harmonic_sum needs l >= 1 and d >= 1, got l={l}, d={d}", "l")
    return sum((F(1, i) for i in range(l, d + 1)), F(0))


def sharp_threshold(d: int) -> Fraction:
    """#_d = 2d(d-2-S_4^d) / (2d-3-2S_4^d), defined for d >= 4."""
    check_dimension(d, 4)
    s4 = harmonic_sum(4, d)
    return 2 * d * (d - 2 - s4) / (2 * d - 3 - 2 * s4)


def lebesgue_p(m: int) -> Fraction:
    """p_m = 2m/(m-1)."""
    if m < 2:
        raise DomainError(f"p_m needs m >= 2, got {m}", "m")
    return F(2 * m, m - 1)


@dataclass(frozen=True)
class LebesgueExponents:
    p: Fraction
    q: Fraction
    r: Fraction


def lebesgue_exponents(m: int) -> LebesgueExponents:
    """p_m = 2m/(m-1), q_m = 2(m+1)/(m-1) and r_m = 2(m+1)/m = p_{m+1}."""
    if m < 2:
        raise DomainError(f"Lebesgue exponents need m >= 2, got {m}", "m")
    return LebesgueExponents(lebesgue_p(m), F(2 * (m + 1), m - 1), F(2 * (m + 1), m))


def _tail_intervals(d: int):
    """(l, left, right) for 5 <= l <= d, ordered by increasing alpha."""
    for l in range(d, 4, -1):
        left = d - F(l, 2)
        yield l, left, left + HALF


# Decay exponents

@lru_cache(maxsize=None)
def beta3_curve() -> PiecewiseExponent:
    return PiecewiseExponent(
        3,
        [
            Piece(F(0), F(2), F(2, 3), F(0)),
            Piece(F(2), F(19, 9), F(0), F(4, 3)),
            Piece(F(19, 9), F(3), F(3, 4), -QUARTER),
        ],
        name="beta_3",
    )


@lru_cache(maxsize=None)
def beta0_curve(d: int) -> PiecewiseExponent:
    """beta_d^0 for d >= 4: 2(alpha/p_d - gamma_d^0) written piece by piece."""
    check_dimension(d, 4)
    s4 = harmonic_sum(4, d)
    sharp = sharp_threshold(d)
    pieces = [Piece(F(0), F(d, 2), F(d - 1, d), F(0))]
    for l, left, right in _tail_intervals(d):
        s = harmonic_sum(l, d)
        pieces.append(Piece(left, right, (d - 1 - s) / d, -HALF + F(l - 1, 2 * d) + s))
    pieces.append(Piece(F(d - 2), F(d - 1), (d - 1 - s4) / d, -HALF + F(3, 2 * d) + s4))
    pieces.append(Piece(F(d - 1), sharp, (2 * d - 3 - 2 * s4) / (2 * d), F(1, d) + s4))
    pieces.append(Piece(sharp, F(d), F(0), F((d - 1) ** 2, d)))
    return PiecewiseExponent(d, pieces, name=f"beta0_{d}")


def beta0(d: int, alpha: RationalLike) -> Fraction:
    alpha = check_alpha(d, alpha)
    return beta3_curve()(alpha) if d == 3 else beta0_curve(d)(alpha)


def l2_decay_bound(d: int, alpha: RationalLike) -> Fraction:
    """alpha - 1 + (d - alpha)/(d + 1), the decay given by the weighted L^2 estimate."""
    alpha = check_alpha(d, alpha)
    return alpha - 1 + (d - alpha) / (d + 1)


def beta_lower(d: int, alpha: RationalLike) -> Fraction:
    """
    Lower bound for the spherical-average decay exponent beta_d(alpha).

    Args:
        d: Dimension, 3 <= d <= 64
        alpha: Dimension of the measure, 0 < alpha <= d

    Returns:
        Fraction: the three-piece formula for d = 3, and max(beta_d^0, alpha - 1 + (d-alpha)/(d+1))
        for d >= 4
    """
    check_dimension(d, 3)
    alpha = check_alpha(d, alpha)
    if d == 3:
        return beta3_curve()(alpha)
    return max(beta0_curve(d)(alpha), l2_decay_bound(d, alpha))


def planar_decay_curve() -> PiecewiseExponent:
    """The known decay exponent in the plane: alpha, then 1/2, then alpha/2."""
    return PiecewiseExponent(
        2,
        [
            Piece(F(0), HALF, F(1), F(0)),
            Piece(HALF, F(1), F(0), HALF),
            Piece(F(1), F(2), HALF, F(0)),
        ],
        name="beta_2",
    )


def planar_decay(alpha: RationalLike) -> Fraction:
    return planar_decay_curve()(check_alpha(2, alpha))


# Restriction exponents

def _gamma_tail_pieces(d: int, broad: bool) -> List[Piece]:
    s4 = harmonic_sum(4, d)
    pieces = [Piece(F(0), F(d, 2), F(0), F(0))]
    for l, left, right in _tail_intervals(d):
        s = harmonic_sum(l, d)
        pieces.append(Piece(left, right, s / (2 * d), QUARTER - F(l - 1, 4 * d) - s / 2))
    pieces.append(Piece(F(d - 2), F(d - 1), s4 / (2 * d), QUARTER - F(3, 4 * d) - s4 / 2))
    top_slope, top_intercept = (1 + 2 * s4) / (4 * d), -F(1, 2 * d) - s4 / 2
    if broad:
        pieces.append(Piece(F(d - 1), F(d), top_slope, top_intercept))
    else:
        sharp = sharp_threshold(d)
        pieces.append(Piece(F(d - 1), sharp, top_slope, top_intercept))
        pieces.append(Piece(sharp, F(d), F(d - 1, 2 * d), F((d - 1) * (1 - d), 2 * d)))
    return pieces


@lru_cache(maxsize=None)
def gamma0_curve(d: int) -> PiecewiseExponent:
    """gamma_d^0(alpha), the exponent of the weighted L^{p_d} restriction estimate."""
    check_dimension(d, 3)
    if d == 3:
        pieces = [Piece(F(0), F(2), F(0), F(0)), Piece(F(2), F(3), F(1, 3), F(-2, 3))]
        return PiecewiseExponent(3, pieces, name="gamma0_3")
    return PiecewiseExponent(d, _gamma_tail_pieces(d, broad=False), name=f"gamma0_{d}")


@lru_cache(maxsize=None)
def gamma_broad_curve(d: int) -> PiecewiseExponent:
    check_dimension(d, 4)
    return PiecewiseExponent(d, _gamma_tail_pieces(d, broad=True), name=f"gamma_broad_{d}")


def gamma0(d: int, alpha: RationalLike) -> Fraction:
    check_dimension(d, 3)
    return gamma0_curve(d)(check_alpha(d, alpha))


def gamma_broad(d: int, alpha: RationalLike) -> Fraction:
    """Broad-norm exponent; equals alpha/(2d^2) - 1/(4d) on (d/2, (d+1)/2]."""
    check_dimension(d, 4)
    return gamma_broad_curve(d)(check_alpha(d, alpha))


def narrow_exponent(d: int, alpha: RationalLike) -> Fraction:
    """(1-d)/2 + (alpha+1)/p_d, the exponent the narrow part forces."""
    check_dimension(d, 2)
    alpha = check_alpha(d, alpha)
    return F(1 - d, 2) + (alpha + 1) / lebesgue_p(d)


# Induction exponents

def _check_order(d: int, m: int, lowest: int):
    if not lowest <= m <= d:
        raise DomainError(f"m must satisfy {lowest} <= m <= d={d}, got m={m}", "m")


@lru_cache(maxsize=None)
def gamma_m_curve(d: int, m: int) -> PiecewiseExponent:
    """
    Closed form of the induction exponent gamma_m for 3 <= m <= d, d >= 4.

    Pieces follow the same alpha-intervals as gamma_d^0; harmonic tails are taken
    up to m instead of d, and a tail interval l with m <= l - 1 carries the
    constant 1/4 - d/(4m).
    """
    check_dimension(d, 4)
    _check_order(d, m, 3)
    floor = QUARTER - F(d, 4 * m)
    s4 = harmonic_sum(4, m)
    pieces = [Piece(F(0), F(d, 2), F(0), floor)]
    for l, left, right in _tail_intervals(d):
        if m <= l - 1:
            pieces.append(Piece(left, right, F(0), floor))
        else:
            s = harmonic_sum(l, m)
            pieces.append(Piece(left, right, s / (2 * m), F(2 * m - l + 1, 4 * m) - (1 + 2 * s) * d / (4 * m)))
    pieces.append(Piece(F(d - 2), F(d - 1), s4 / (2 * m), F(2 * m - 3, 4 * m) - (1 + 2 * s4) * d / (4 * m)))
    pieces.append(Piece(F(d - 1), F(d), (1 + 2 * s4) / (4 * m), F(m - 1, 2 * m) - (1 + s4) * d / (2 * m)))
    return PiecewiseExponent(d, pieces, name=f"gamma_{m}^{d}")


def gamma_closed_form(d: int, alpha: RationalLike, m: int) -> Fraction:
    check_dimension(d, 4)
    return gamma_m_curve(d, m)(check_alpha(d, alpha))


def _check_middle_range(d: int, alpha: Fraction):
    if not F(d, 2) <= alpha <= F(d + 1, 2):
        raise DomainError(
            f"the middle-range recursion needs d/2 <= alpha <= (d+1)/2, got alpha={alpha}", "alpha"
        )


def gamma_middle_closed_form(d: int, alpha: RationalLike, m: int) -> Fraction:
    """(m-d)/(4m) for m <= d-1 and alpha/(2d^2) - 1/(4d) at m = d, on d/2 <= alpha <= (d+1)/2."""
    check_dimension(d, 3)
    alpha = check_alpha(d, alpha)
    _check_middle_range(d, alpha)
    _check_order(d, m, 2)
    if m < d:
        return F(m - d, 4 * m)
    return alpha / (2 * d * d) - F(1, 4 * d)


@dataclass(frozen=True)
class TangentBaseExponents:
    linear_interpolation: Fraction
    bilinear: Fraction

    @property
    def bilinear_better(self) -> bool:
        return self.bilinear <= self.linear_interpolation


def tangent_base_exponents(d: int, alpha: RationalLike) -> TangentBaseExponents:
    """The two exponents available for the tangent part of the m = 3 base case."""
    check_dimension(d, 3)
    alpha = check_alpha(d, alpha)
    return TangentBaseExponents(
        linear_interpolation=alpha / 18 - F(5 * d, 36) + F(1, 3),
        bilinear=alpha / 12 - F(d, 6) + F(1, 3),
    )


def _base_gamma3(d: int, alpha: Fraction) -> Fraction:
    tangent = tangent_base_exponents(d, alpha)
    return max(QUARTER - F(d, 12), min(tangent.linear_interpolation, tangent.bilinear))


def _recursion_step(d: int, alpha: Fraction, m: int, previous: Fraction) -> Fraction:
    return max(
        QUARTER - F(d, 4 * m),
        (HALF - (d - alpha) / (2 * m)) / m + previous * (1 - F(1, m)),
    )


def gamma_recursion(d: int, alpha: RationalLike, m: int, base_dimension: int = 3) -> Fraction:
    """
    Evaluate gamma_m by the induction on m.

    gamma_m = max{1/4 - d/(4m), (1/2 - (d-alpha)/(2m))/m + gamma_{m-1}(1 - 1/m)}

    Args:
        d: Dimension
        alpha: Dimension of the weight
        m: Induction level
        base_dimension: 3 starts from the general base case
            gamma_3 = max{1/4 - d/12, min{alpha/18 - 5d/36 + 1/3, alpha/12 - d/6 + 1/3}};
            2 starts from gamma_2 = 1/4 - d/8 and needs d/2 <= alpha <= (d+1)/2

    Returns:
        Fraction: gamma_m, exact

    Raises:
        DomainError: If m or alpha lies outside the range of the chosen recursion
    """
    check_dimension(d, 3)
    alpha = check_alpha(d, alpha)
    if base_dimension == 3:
        _check_order(d, m, 3)
        gamma = _base_gamma3(d, alpha)
    elif base_dimension == 2:
        _check_order(d, m, 2)
        _check_middle_range(d, alpha)
        gamma = QUARTER - F(d, 8)
    else:
        raise DomainError(f"base_dimension must be 2 or 3, got {base_dimension}", "base_dimension")
    for k in range(base_dimension + 1, m + 1):
        gamma = _recursion_step(d, alpha, k, gamma)
    return gamma


@dataclass(frozen=True)
class RecursionMismatch:
    family: str
    alpha: Fraction
    m: int
    closed_form: Fraction
    recursion: Fraction


def check_recursion(d: int, step: RationalLike = F(1, 100)) -> List[RecursionMismatch]:
    """
    Compare the closed forms with the recursion on a rational alpha grid.

    The general family runs over alpha in (0, d] and 3 <= m <= d; the middle family
    over alpha in [d/2, (d+1)/2] and 2 <= m <= d. An empty list means exact agreement.
    """
    check_dimension(d, 4)
    step = to_rational(step, "step")
    mismatches: List[RecursionMismatch] = []

    alpha = step
    while alpha <= d:
        gamma = _base_gamma3(d, alpha)
        for m in range(3, d + 1):
            if m > 3:
                gamma = _recursion_step(d, alpha, m, gamma)
            closed = gamma_m_curve(d, m)(alpha)
            if closed != gamma:
                mismatches.append(RecursionMismatch("general", alpha, m, closed, gamma))
        if F(d, 2) <= alpha <= F(d + 1, 2):
            gamma = QUARTER - F(d, 8)
            for m in range(2, d + 1):
                if m > 2:
                    gamma = _recursion_step(d, alpha, m, gamma)
                closed = gamma_middle_closed_form(d, alpha, m)
                if closed != gamma:
                    mismatches.append(RecursionMismatch("middle", alpha, m, closed, gamma))
        alpha += step

    logger.info("recursion check d=%d step=%s: %d mismatches", d, step, len(mismatches))
    return mismatches


# Weighted L^2 and bilinear exponents

def linear_l2_exponent(d: int, alpha: RationalLike, m: int) -> Fraction:
    """1/2 - (d-alpha)/(2(m+1)): the weighted L^2 exponent on m-dimensional cube families."""
    check_dimension(d, 2)
    alpha = check_alpha(d, alpha)
    _check_order(d, m, 2)
    return HALF - (d - alpha) / (2 * (m + 1))


def bilinear_exponent(d: int, alpha: RationalLike, m: int) -> Fraction:
    """-(2d - 2m - alpha)/(4(m+1)), the weighted bilinear exponent at Lebesgue exponent r_m."""
    check_dimension(d, 2)
    alpha = check_alpha(d, alpha)
    _check_order(d, m, 2)
    return -(2 * d - 2 * m - alpha) / (4 * (m + 1))


def rescaling_exponent(d: int, alpha: RationalLike, p: RationalLike, gamma: RationalLike) -> Fraction:
    """Power of K gained when a 1/K-cap estimate is rescaled: (alpha+1)/p - (d-1)/2 - gamma."""
    alpha, p, gamma = to_rational(alpha), to_rational(p, "p"), to_rational(gamma, "gamma")
    return (alpha + 1) / p - F(d - 1, 2) - gamma


# Thresholds and criteria

def _check_p(p: Fraction, minimum: int):
    if p < minimum:
        raise DomainError(f"p must be at least {minimum}, got {p}", "p")


def mattila_criterion(alpha: RationalLike, p: RationalLike, gamma: RationalLike, d: int) -> bool:
    """True iff gamma <= alpha(1/p + 1/2) - d/2."""
    alpha, p, gamma = to_rational(alpha), to_rational(p, "p"), to_rational(gamma, "gamma")
    _check_p(p, 1)
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}", "alpha")
    return gamma <= alpha * (1 / p + HALF) - F(d, 2)


def narrow_closure(gamma: RationalLike, d: int, alpha: RationalLike, p: RationalLike) -> bool:
    """True iff gamma >= (1-d)/2 + (alpha+1)/p."""
    alpha, p, gamma = to_rational(alpha), to_rational(p, "p"), to_rational(gamma, "gamma")
    _check_p(p, 2)
    return gamma >= F(1 - d, 2) + (alpha + 1) / p


def decay_from_restriction(alpha: RationalLike, p: RationalLike, gamma: RationalLike) -> Fraction:
    """2(alpha/p - gamma)."""
    alpha, p, gamma = to_rational(alpha), to_rational(p, "p"), to_rational(gamma, "gamma")
    _check_p(p, 1)
    return 2 * (alpha / p - gamma)


def solve_mattila_threshold(d: int, p: RationalLike, slope: RationalLike, intercept: RationalLike) -> Fraction:
    """
    Smallest alpha where gamma = slope*alpha + intercept meets the Mattila criterion.

    Solves slope*alpha + intercept = alpha(1/p + 1/2) - d/2 exactly.
    """
    p, slope, intercept = to_rational(p, "p"), to_rational(slope, "slope"), to_rational(intercept, "intercept")
    _check_p(p, 1)
    gain = 1 / p + HALF - slope
    if gain <= 0:
        raise DomainError("the criterion never holds: gamma grows at least as fast as its bound", "slope")
    return (intercept + F(d, 2)) / gain


def falconer_threshold(d: int) -> Fraction:
    """9/5 for d = 3; d/2 + 1/4 + (d+1)/(4(2d+1)(d-1)) for d >= 4."""
    check_dimension(d, 3)
    if d == 3:
        return F(9, 5)
    return F(d, 2) + QUARTER + F(d + 1, 4 * (2 * d + 1) * (d - 1))


def refined_strichartz_threshold(d: int) -> Fraction:
    """Threshold from the weighted L^2 estimate alone: (d^2 + d + 1)/(2d + 1)."""
    check_dimension(d, 2)
    return F(d * d + d + 1, 2 * d + 1)


def tomas_stein_exponent(d: int, alpha: RationalLike) -> Fraction:
    alpha = check_alpha(d, alpha)
    return alpha * (d - 1) / (2 * d * (d + 1))


def tomas_stein_crossover(d: int) -> Fraction:
    """d - 1/d: from here on gamma_d^0 is no smaller than the Tomas-Stein exponent."""
    check_dimension(d, 3)
    return d - F(1, d)


# Earlier decay bounds

@dataclass(frozen=True)
class PriorBounds:
    mattila: Optional[Fraction]
    erdogan: Optional[Fraction]
    luca_rogers: Optional[Fraction]
    tomas_stein: Fraction

    def decay_bounds(self) -> Dict[str, Fraction]:
        """The decay bounds present at this alpha (Tomas-Stein is a restriction exponent, not one of them)."""
        named = {"mattila": self.mattila, "erdogan": self.erdogan, "luca_rogers": self.luca_rogers}
        return {name: value for name, value in named.items() if value is not None}

    @property
    def best(self) -> Optional[Fraction]:
        bounds = self.decay_bounds()
        return max(bounds.values()) if bounds else None


def prior_bounds(d: int, alpha: RationalLike) -> PriorBounds:
    """
    Earlier decay bounds, each reported only on the alpha-range where it was stated.

    Mattila: alpha up to (d-1)/2, then (d-1)/2 up to d/2.
    Erdogan: alpha - 1 + (d+2-2alpha)/4 on [d/2, d/2 + 2/3 + 1/d].
    Luca-Rogers: alpha - 1 + (d-alpha)^2/((d-1)(2d-alpha-1)) on [d/2 + 2/3 + 1/d, d].
    """
    check_dimension(d, 3)
    alpha = check_alpha(d, alpha)
    half_below = F(d - 1, 2)
    split = F(d, 2) + F(2, 3) + F(1, d)

    if alpha <= half_below:
        mattila = alpha
    elif alpha <= F(d, 2):
        mattila = half_below
    else:
        mattila = None

    erdogan = alpha - 1 + (d + 2 - 2 * alpha) / 4 if F(d, 2) <= alpha <= split else None
    luca_rogers = (
        alpha - 1 + (d - alpha) ** 2 / ((d - 1) * (2 * d - alpha - 1)) if split <= alpha <= d else None
    )
    return PriorBounds(mattila, erdogan, luca_rogers, tomas_stein_exponent(d, alpha))


@dataclass(frozen=True)
class BoundComparison:
    alpha: Fraction
    new_bound: Fraction
    prior_bounds: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def best_prior(self) -> Optional[Fraction]:
        return max(self.prior_bounds.values()) if self.prior_bounds else None

    @property
    def strictly_better(self) -> bool:
        return all(self.new_bound > value for value in self.prior_bounds.values())


def compare_with_prior(d: int, alpha: RationalLike) -> BoundComparison:
    alpha = check_alpha(d, alpha)
    return BoundComparison(alpha, beta_lower(d, alpha), prior_bounds(d, alpha).decay_bounds())


# Tables

@dataclass(frozen=True)
class ExponentRow:
    d: int
    alpha: Fraction
    beta_lower: Fraction
    gamma0: Fraction
    gamma_broad: Optional[Fraction]
    mattila_ok: bool
    best_prior: Optional[Fraction]
    strictly_better: bool


def exponent_table(d: int, alphas: Iterable[RationalLike]) -> List[ExponentRow]:
    """
    One row per alpha for the CSV of the exponents subcommand.

    mattila_ok applies the Mattila criterion with p = p_d and gamma = gamma_d^0.
    """
    check_dimension(d, 3)
    p = lebesgue_p(d)
    rows = []
    for alpha in alphas:
        alpha = check_alpha(d, alpha)
        g0 = gamma0(d, alpha)
        comparison = compare_with_prior(d, alpha)
        rows.append(
            ExponentRow(
                d=d,
                alpha=alpha,
                beta_lower=comparison.new_bound,
                gamma0=g0,
                gamma_broad=gamma_broad(d, alpha) if d >= 4 else None,
                mattila_ok=mattila_criterion(alpha, p, g0, d),
                best_prior=comparison.best_prior,
                strictly_better=comparison.strictly_better,
            )
        )
    logger.debug("exponent table d=%d: %d rows", d, len(rows))
    return rows


def exponent_curves(d: int) -> Dict[str, PiecewiseExponent]:
    """Curves drawn by the exponent plot."""
    if d == 3:
        return {"beta_lower": beta3_curve(), "gamma0": gamma0_curve(3)}
    return {"beta0": beta0_curve(d), "gamma0": gamma0_curve(d), "gamma_broad": gamma_broad_curve(d)}


if __name__ == "__main__":
    print("=== Exponents at d = 3 ===")
    print(f"beta_lower(3, 2) = {beta_lower(3, 2)}")
    print(f"gamma0(3, 3) = {gamma0(3, 3)}")
    print(f"falconer_threshold(3) = {falconer_threshold(3)}")
    for d in range(4, 9):
        print(f"\n=== d = {d} ===")
        print(f"#_d = {sharp_threshold(d)}")
        print(f"falconer threshold = {falconer_threshold(d)}")
        print(f"gamma0 breakpoints = {[str(b) for b in gamma0_curve(d).breakpoints]}")
