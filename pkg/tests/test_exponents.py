from fractions import Fraction as F

import pytest

from exponents import (
    PiecewiseExponent,
    Piece,
    alpha_grid,
    beta0,
    beta0_curve,
    beta3_curve,
    beta_lower,
    bilinear_exponent,
    check_recursion,
    compare_with_prior,
    decay_from_restriction,
    decimal_string,
    exponent_table,
    falconer_threshold,
    format_rational,
    gamma0,
    gamma0_curve,
    gamma_broad,
    gamma_broad_curve,
    gamma_closed_form,
    gamma_m_curve,
    gamma_middle_closed_form,
    gamma_recursion,
    harmonic_sum,
    lebesgue_exponents,
    lebesgue_p,
    linear_l2_exponent,
    mattila_criterion,
    narrow_closure,
    narrow_exponent,
    parse_table,
    planar_decay,
    prior_bounds,
    refined_strichartz_threshold,
    rescaling_exponent,
    sharp_threshold,
    solve_mattila_threshold,
    tangent_base_exponents,
    tomas_stein_crossover,
    tomas_stein_exponent,
    l2_decay_bound,
)
from numerics.errors import DomainError

STEP = F(1, 100)


def grid(low, high, step=STEP):
    """Rational grid strictly above low, up to and including high."""
    return [a for a in alpha_grid(F(low), F(high), step) if a > low]


def test_harmonic_sum():
    assert harmonic_sum(4, 4) == F(1, 4)
    assert harmonic_sum(5, 4) == 0
    assert harmonic_sum(4, 5) == F(9, 20)
    assert harmonic_sum(1, 3) == F(11, 6)


def test_sharp_threshold_values():
    assert sharp_threshold(4) == F(28, 9)
    s = F(9, 20)
    assert sharp_threshold(5) == 10 * (3 - s) / (7 - 2 * s)
    assert sharp_threshold(5) == F(255, 61)


@pytest.mark.parametrize("d", range(4, 65))
def test_sharp_threshold_below_dimension(d):
    assert d - 1 < sharp_threshold(d) < d


def test_dimension_limits():
    with pytest.raises(DomainError):
        sharp_threshold(3)
    with pytest.raises(DomainError):
        beta_lower(65, 1)
    with pytest.raises(DomainError):
        gamma_broad(3, 1)


def test_beta_lower_three():
    assert beta_lower(3, 2) == F(4, 3)
    assert beta_lower(3, F(19, 9)) == F(4, 3)
    assert beta_lower(3, 3) == 2
    assert beta_lower(3, "1.5") == 1


@pytest.mark.parametrize("alpha", [0, -1, F(31, 10)])
def test_beta_lower_domain(alpha):
    with pytest.raises(DomainError):
        beta_lower(3, alpha)


def test_gamma0_examples():
    assert gamma0(3, 2) == 0
    assert gamma0(3, 3) == F(1, 3)
    for d in range(4, 9):
        assert gamma0(d, d) == F(d - 1, 2 * d)
        assert gamma0(d, F(d, 2)) == 0


def test_gamma_broad_examples():
    assert gamma_broad(4, 2) == 0
    assert gamma_broad(4, 1) == 0
    s = harmonic_sum(4, 5)
    assert gamma_broad(5, 5) == (1 + 2 * s) * 5 / 20 - F(1, 10) - s / 2


@pytest.mark.parametrize("d", range(4, 9))
def test_gamma_broad_on_middle_range(d):
    for alpha in grid(F(d, 2), F(d + 1, 2)):
        assert gamma_broad(d, alpha) == alpha / (2 * d * d) - F(1, 4 * d)


def test_gamma_recursion_examples():
    for d in range(4, 9):
        for alpha in grid(0, d - 1, F(1, 4)):
            assert gamma_recursion(d, alpha, 3) == -F(d, 12) + F(1, 4)
    assert gamma_recursion(4, 2, 4) == 0


def test_gamma_recursion_domain():
    with pytest.raises(DomainError):
        gamma_recursion(5, 3, 2)
    with pytest.raises(DomainError):
        gamma_recursion(5, 3, 6)
    with pytest.raises(DomainError):
        gamma_recursion(5, 4, 3, base_dimension=2)
    with pytest.raises(DomainError):
        gamma_recursion(5, 3, 3, base_dimension=4)


@pytest.mark.parametrize("d", range(4, 9))
def test_recursion_closure(d):
    assert check_recursion(d) == []


@pytest.mark.parametrize("d", range(4, 9))
def test_recursion_top_level_matches_broad_exponent(d):
    for alpha in grid(0, d, F(1, 10)):
        assert gamma_recursion(d, alpha, d) == gamma_closed_form(d, alpha, d) == gamma_broad(d, alpha)


@pytest.mark.parametrize("d", range(4, 9))
def test_middle_recursion_agrees_with_general_one(d):
    for alpha in grid(F(d, 2), F(d + 1, 2), F(1, 20)):
        for m in range(3, d + 1):
            assert gamma_recursion(d, alpha, m, base_dimension=2) == gamma_middle_closed_form(d, alpha, m)
        assert gamma_recursion(d, alpha, d, base_dimension=2) == gamma_recursion(d, alpha, d)


@pytest.mark.parametrize("d", range(3, 13))
def test_curves_are_continuous(d):
    curves = [gamma0_curve(d)]
    if d == 3:
        curves.append(beta3_curve())
    else:
        curves += [beta0_curve(d), gamma_broad_curve(d)]
        curves += [gamma_m_curve(d, m) for m in range(3, d + 1)]
    for curve in curves:
        assert curve.is_continuous(), (curve.name, curve.discontinuities())


def test_beta3_junctions():
    curve = beta3_curve()
    assert curve.breakpoints == [2, F(19, 9)]
    assert F(2, 3) * 2 == F(4, 3) == F(3, 4) * F(19, 9) - F(1, 4)


def test_gamma0_breakpoints_four():
    assert gamma0_curve(4).breakpoints == [2, 3, F(28, 9)]


def test_gamma0_breakpoints_six():
    assert gamma0_curve(6).breakpoints == [3, F(7, 2), 4, 5, sharp_threshold(6)]


def test_base_case_bilinear_is_better():
    for d in range(3, 9):
        for alpha in grid(0, d, F(1, 10)):
            assert tangent_base_exponents(d, alpha).bilinear_better


@pytest.mark.parametrize("d", range(3, 7))
def test_beta_lower_from_restriction(d):
    p = lebesgue_p(d)
    for alpha in grid(0, d, F(1, 20)):
        from_gamma = decay_from_restriction(alpha, p, gamma0(d, alpha))
        assert beta_lower(d, alpha) == max(from_gamma, l2_decay_bound(d, alpha))
        if d >= 4:
            assert beta0(d, alpha) == from_gamma


def test_decay_from_restriction_examples():
    assert decay_from_restriction(2, 3, 0) == F(4, 3)
    assert decay_from_restriction(3, 3, F(1, 3)) == F(4, 3)
    for d in range(3, 9):
        for alpha in grid(0, d, F(1, 4)):
            gamma = F(1, 2) - (d - alpha) / (2 * (d + 1))
            assert gamma == linear_l2_exponent(d, alpha, d)
            assert decay_from_restriction(alpha, 2, gamma) == alpha - 1 + (d - alpha) / (d + 1)


def test_falconer_threshold_values():
    assert falconer_threshold(3) == F(9, 5)
    assert falconer_threshold(4) == 2 + F(1, 4) + F(5, 108)


@pytest.mark.parametrize("d", range(4, 13))
def test_falconer_threshold_identity(d):
    threshold = falconer_threshold(d)
    assert threshold == F(d * (2 * d * d - 1), 2 * (2 * d + 1) * (d - 1))
    assert threshold == solve_mattila_threshold(d, lebesgue_p(d), F(1, 2 * d * d), -F(1, 4 * d))


@pytest.mark.parametrize("d", range(3, 13))
def test_falconer_threshold_is_infimum(d):
    threshold = falconer_threshold(d)
    p = lebesgue_p(d)

    def gamma(alpha):
        return 0 if d == 3 else alpha / (2 * d * d) - F(1, 4 * d)

    assert mattila_criterion(threshold, p, gamma(threshold), d)
    below = threshold - F(1, 1000)
    assert not mattila_criterion(below, p, gamma(below), d)


def test_mattila_criterion_examples():
    assert mattila_criterion(F(9, 5), 3, 0, 3)
    assert F(9, 5) * (F(1, 3) + F(1, 2)) - F(3, 2) == 0
    assert mattila_criterion(2, 3, 0, 3)
    assert not mattila_criterion(1, 3, 0, 3)


def test_narrow_closure_examples():
    assert narrow_closure(0, 3, 2, 3)
    assert not narrow_closure(-F(1, 100), 3, 2, 3)
    with pytest.raises(DomainError):
        narrow_closure(0, 3, 2, 1)


@pytest.mark.parametrize("d", range(4, 9))
def test_narrow_closure_of_broad_exponent(d):
    p = lebesgue_p(d)
    for alpha in alpha_grid(F(d, 2), F(d + 1, 2), STEP):
        assert narrow_closure(gamma_broad(d, alpha), d, alpha, p)
        threshold = F(1 - d, 2) + (alpha + 1) / p
        assert not narrow_closure(threshold - F(1, 100), d, alpha, p)


@pytest.mark.parametrize("d", range(4, 9))
def test_narrow_exponent_is_top_piece(d):
    for alpha in grid(sharp_threshold(d), d, F(1, 50)):
        assert narrow_exponent(d, alpha) == gamma0(d, alpha)


def test_prior_bounds_examples():
    assert prior_bounds(3, 3).luca_rogers == 2
    for d in range(3, 9):
        bounds = prior_bounds(d, F(d, 2))
        assert bounds.erdogan == F(d, 2) - F(1, 2)
        assert bounds.mattila == F(d - 1, 2)
    assert prior_bounds(4, 1).erdogan is None
    assert prior_bounds(4, 1).luca_rogers is None
    assert prior_bounds(4, 1).mattila == 1
    assert prior_bounds(4, 3).mattila is None


@pytest.mark.parametrize("d", range(3, 9))
def test_tomas_stein_crossover(d):
    crossover = tomas_stein_crossover(d)
    assert crossover == d - F(1, d)
    assert tomas_stein_exponent(d, crossover) == gamma0(d, crossover)
    assert tomas_stein_exponent(d, crossover - F(1, 1000)) > gamma0(d, crossover - F(1, 1000))
    assert tomas_stein_exponent(d, crossover + F(1, 1000)) < gamma0(d, crossover + F(1, 1000))


@pytest.mark.parametrize("d", range(3, 9))
def test_improvement_over_prior_bounds(d):
    for alpha in grid(F(d, 2), d):
        if alpha == d:
            continue
        comparison = compare_with_prior(d, alpha)
        assert comparison.prior_bounds, alpha
        assert "mattila" not in comparison.prior_bounds
        assert comparison.strictly_better, (alpha, comparison)


def test_lebesgue_exponents():
    exps = lebesgue_exponents(3)
    assert (exps.p, exps.q, exps.r) == (3, 4, F(8, 3))
    for m in range(2, 10):
        assert lebesgue_exponents(m).r == lebesgue_p(m + 1)


def test_refined_strichartz_threshold():
    for d in range(2, 13):
        threshold = refined_strichartz_threshold(d)
        assert threshold == F(d, 2) + F(1, 4) + F(3, 8 * d + 4)
        assert threshold == solve_mattila_threshold(d, 2, F(1, 2 * (d + 1)), F(1, 2 * (d + 1)))


def test_solve_mattila_threshold_rejects_fast_growth():
    with pytest.raises(DomainError):
        solve_mattila_threshold(3, 2, 1, 0)


def test_bilinear_exponent_is_tangent_base():
    for d in range(3, 8):
        for alpha in grid(0, d, F(1, 4)):
            assert bilinear_exponent(d, alpha, 2) == tangent_base_exponents(d, alpha).bilinear


def test_rescaling_exponent():
    assert rescaling_exponent(3, 2, 3, 0) == 0
    assert rescaling_exponent(4, 3, 2, F(1, 4)) == F(1, 4)


def test_planar_decay():
    assert planar_decay(F(1, 4)) == F(1, 4)
    assert planar_decay(F(3, 4)) == F(1, 2)
    assert planar_decay(2) == 1


def test_exponent_table_rows():
    alphas = parse_table("1/10:3:1/10")
    rows = exponent_table(3, alphas)
    assert len(rows) == 30
    for row in rows:
        assert row.beta_lower == beta_lower(3, row.alpha)
        assert row.gamma_broad is None
        assert row.mattila_ok == (row.alpha >= F(9, 5))
    rows4 = exponent_table(4, [3])
    assert rows4[0].gamma_broad == gamma_broad(4, 3)


def test_piecewise_evaluation_conventions():
    curve = PiecewiseExponent(2, [Piece(F(0), F(1), F(1), F(0)), Piece(F(1), F(2), F(0), F(5))])
    assert curve(1) == 1
    assert curve(F(11, 10)) == 5
    assert curve.right_limit(F(1)) == 5
    assert curve.discontinuities() == [1]
    with pytest.raises(DomainError):
        curve(0)
    with pytest.raises(DomainError):
        PiecewiseExponent(2, [Piece(F(0), F(1), F(1), F(0)), Piece(F(2), F(3), F(0), F(0))])


def test_rational_formatting():
    assert format_rational(F(4, 3)) == "4/3"
    assert format_rational(F(2)) == "2/1"
    assert decimal_string(F(1, 3)) == "0.333333333333"
    assert decimal_string(F(4, 3)) == "1.33333333333"
    assert parse_table("1/2:1:1/4") == [F(1, 2), F(3, 4), F(1)]
