"""Exact-rational exponent engine: closed forms, recursions, thresholds and prior-bound comparison."""

from exponents.formulas import (
    BoundComparison,
    ExponentRow,
    LebesgueExponents,
    PriorBounds,
    RecursionMismatch,
    TangentBaseExponents,
    beta0,
    beta0_curve,
    beta3_curve,
    beta_lower,
    bilinear_exponent,
    check_recursion,
    compare_with_prior,
    decay_from_restriction,
    exponent_curves,
    exponent_table,
    falconer_threshold,
    gamma0,
    gamma0_curve,
    gamma_broad,
    gamma_broad_curve,
    gamma_closed_form,
    gamma_m_curve,
    gamma_middle_closed_form,
    gamma_recursion,
    harmonic_sum,
    l2_decay_bound,
    lebesgue_exponents,
    lebesgue_p,
    linear_l2_exponent,
    mattila_criterion,
    narrow_closure,
    narrow_exponent,
    planar_decay,
    planar_decay_curve,
    prior_bounds,
    refined_strichartz_threshold,
    rescaling_exponent,
    sharp_threshold,
    solve_mattila_threshold,
    tangent_base_exponents,
    tomas_stein_crossover,
    tomas_stein_exponent,
)
from exponents.piecewise import Piece, PiecewiseExponent
from exponents.rational import alpha_grid, decimal_string, format_rational, parse_table, to_rational
