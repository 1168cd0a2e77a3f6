import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate, special

from extension.operator import (
    FieldSample,
    extend,
    extend_radial,
    field_grid,
    weighted_norm,
    with_spacing,
)
from extension.profiles import (
    bump_recipe,
    cap_recipe,
    combine,
    constant_recipe,
    gaussian_recipe,
    make_profile,
    modulated_recipe,
    random_smooth_recipe,
    sphere_nodes_for,
    sphere_profile,
)
from extension.rescaling import parabolic_rescale, rescaling_gap
from extension.scaling import norm_at_radius, scaling_experiment, theorem_exponent
from numerics.errors import BudgetError, DomainError, PreconditionError, ResolutionError
from numerics.rng import STREAM_POINTS, make_generator, random_points_in_ball
from weights.recipes import cantor_weight, plane_weight, uniform_weight
from weights.rescale import forward_map
from weights.sampled import SampledWeight


def points_in_ball(count, d, radius, seed=11):
    return random_points_in_ball(make_generator(seed, STREAM_POINTS), count, d, radius)


def test_constant_profile_at_origin_is_its_integral():
    f = make_profile(2, constant_recipe(2), 1.0 / 200)
    field = extend(f, [[0.0, 0.0]])
    assert field.values[0] == pytest.approx(2.0, abs=1e-13)
    assert f.integral() == pytest.approx(2.0, abs=1e-13)


def test_constant_profile_matches_sinc_on_the_horizontal_axis():
    x1 = np.linspace(-50.0, 50.0, 101)
    f = make_profile(2, constant_recipe(2), 1.0 / 200)
    field = extend(f, np.column_stack([x1, np.zeros_like(x1)]))
    expected = 2.0 * np.sinc(x1 / np.pi)
    assert np.max(np.abs(field.values - expected)) < 1e-8


@pytest.mark.parametrize("x2", [1.0, 5.0, 20.0, 40.0])
def test_constant_profile_matches_fresnel_integral(x2):
    f = make_profile(2, constant_recipe(2), 1.0 / (4 * 40))
    value = extend(f, [[0.0, x2]]).values[0]
    real, _ = integrate.quad(lambda w: math.cos(x2 * w * w), -1, 1, limit=400, epsabs=1e-13)
    imag, _ = integrate.quad(lambda w: math.sin(x2 * w * w), -1, 1, limit=400, epsabs=1e-13)
    assert abs(value - complex(real, imag)) < 1e-6


def test_coarse_rule_is_a_resolution_error():
    f = make_profile(2, constant_recipe(2), 0.1)
    with pytest.raises(ResolutionError) as info:
        extend(f, [[10.0, 0.0]])
    assert info.value.parameter == "h_omega"


def test_extension_is_linear():
    h = 1.0 / 80
    f = make_profile(2, bump_recipe(2), h)
    g = make_profile(2, gaussian_recipe(2), h)
    points = points_in_ball(50, 2, 20.0)
    combined = extend(combine(2.0, f, -3j, g), points).values
    expected = 2.0 * extend(f, points).values - 3j * extend(g, points).values
    np.testing.assert_allclose(combined, expected, atol=1e-12)


def test_modulation_translates_the_modulus():
    base = bump_recipe(2)
    shift = 3.0
    h = 1.0 / 64
    f = make_profile(2, base, h)
    f_mod = make_profile(2, modulated_recipe(base, [shift]), h)
    points = points_in_ball(50, 2, 10.0)
    shifted = points + np.array([shift, 0.0])
    np.testing.assert_allclose(
        np.abs(extend(f_mod, points).values), np.abs(extend(f, shifted).values), atol=1e-10
    )


def test_halving_the_spacing_changes_little():
    recipe = random_smooth_recipe(2, seed=5)
    points = points_in_ball(40, 2, 20.0)
    coarse = extend(make_profile(2, recipe, 1.0 / 80), points).values
    fine = extend(make_profile(2, recipe, 1.0 / 160), points).values
    assert np.max(np.abs(coarse - fine)) < 1e-6 * np.max(np.abs(fine))


def test_threads_do_not_change_values():
    f = make_profile(2, random_smooth_recipe(2, seed=9), 1.0 / 80)
    points = points_in_ball(200, 2, 20.0)
    np.testing.assert_array_equal(extend(f, points, threads=1).values, extend(f, points, threads=4).values)


@pytest.mark.parametrize("recipe_factory", [constant_recipe, gaussian_recipe])
def test_radial_reduction_matches_direct_sum_in_the_plane(recipe_factory):
    recipe = recipe_factory(2)
    f = make_profile(2, recipe, 1.0 / 120)
    points = points_in_ball(60, 2, 30.0)
    assert np.max(np.abs(extend(f, points).values - extend_radial(f, points).values)) < 1e-8


@pytest.mark.parametrize("recipe_factory", [constant_recipe, gaussian_recipe])
def test_radial_reduction_matches_direct_sum_in_space(recipe_factory):
    recipe = recipe_factory(3)
    f = make_profile(3, recipe, 1.0 / 24)
    points = points_in_ball(50, 3, 6.0)
    assert np.max(np.abs(extend(f, points).values - extend_radial(f, points).values)) < 1e-8


def test_radial_reduction_needs_a_radial_recipe():
    f = make_profile(2, cap_recipe(2, [0.25], 0.25), 1.0 / 40)
    with pytest.raises(DomainError):
        extend_radial(f, [[1.0, 1.0]])


def test_circle_extension_is_a_bessel_function():
    radius = 20.0
    g = sphere_profile(2, sphere_nodes_for(radius))
    points = points_in_ball(50, 2, radius)
    expected = 2 * np.pi * special.j0(np.linalg.norm(points, axis=1))
    np.testing.assert_allclose(extend(g, points).values, expected, atol=1e-10)


def test_sphere_extension_in_space():
    g = sphere_profile(3, 4000)
    points = points_in_ball(20, 3, 3.0)
    r = np.linalg.norm(points, axis=1)
    expected = 4 * np.pi * np.sinc(r / np.pi)
    np.testing.assert_allclose(extend(g, points).values.real, expected, atol=5e-2)


def test_sphere_extension_rejects_too_few_nodes():
    g = sphere_profile(2, 64)
    with pytest.raises(ResolutionError):
        extend(g, [[20.0, 0.0]])


def test_sphere_profile_cannot_be_read_as_paraboloid():
    g = sphere_profile(2, 64)
    with pytest.raises(DomainError):
        extend(g, [[1.0, 0.0]], surface="paraboloid")


@pytest.mark.parametrize("K", [2, 4, 8])
@pytest.mark.parametrize("omega0", [0.0, 0.25])
def test_parabolic_rescaling_identity(K, omega0):
    h_f = 1.0 / (8 * 16)
    f = make_profile(2, bump_recipe(2, [omega0], 1.0 / K), h_f)
    g, T = parabolic_rescale(f, [omega0], K, h_omega=K * h_f)
    points = points_in_ball(100, 2, 16.0, seed=K)
    assert rescaling_gap(f, g, T, points, extend) < 1e-6
    assert g.l2_norm() == pytest.approx(f.l2_norm(), abs=1e-8)


def test_rescaling_map_without_translation_is_anisotropic_scaling():
    f = make_profile(2, bump_recipe(2, [0.0], 0.25), 1.0 / 64)
    _, T = parabolic_rescale(f, [0.0], 4)
    np.testing.assert_allclose(T.matrix, np.diag([1 / 4, 1 / 16]))
    np.testing.assert_allclose(T.apply([[8.0, 32.0]]), [[2.0, 2.0]])


def test_rescaling_map_matrix_matches_forward_map():
    f = make_profile(2, bump_recipe(2, [0.5], 0.25), 1.0 / 64)
    _, T = parabolic_rescale(f, [0.5], 4)
    points = make_generator(5, STREAM_POINTS).normal(size=(30, 2)) * 20
    np.testing.assert_allclose(T.apply(points), forward_map(points, np.array([0.5]), 4.0))
    np.testing.assert_allclose(T.apply([[0.0, 16.0]]), [[4.0, 1.0]])


def test_default_rescaled_spacing_stays_rule_compliant():
    h_f = 1.0 / 64
    f = make_profile(2, bump_recipe(2, [0.5], 0.25), h_f)
    g, T = parabolic_rescale(f, [0.5], 4)
    assert g.h_omega == pytest.approx(4 * h_f / 2)
    points = points_in_ball(30, 2, 16.0)
    assert rescaling_gap(f, g, T, points, extend) < 1e-6


@pytest.mark.parametrize(
    "center, radius, omega0, K",
    [
        ([0.0], 0.5, [0.0], 4),
        ([0.5], 0.25, [0.0], 4),
        ([0.0], 0.25, [0.0], 1),
        ([0.9], 0.1, [0.9], 2),
    ],
)
def test_rescaling_rejects_bad_caps(center, radius, omega0, K):
    f = make_profile(2, bump_recipe(2, center, radius), 1.0 / 64)
    with pytest.raises(DomainError):
        parabolic_rescale(f, omega0, K)


def test_field_grid_points_lie_in_the_ball_on_the_half_lattice():
    points = field_grid(2, 4.0)
    assert np.all(np.linalg.norm(points, axis=1) <= 4.0)
    np.testing.assert_allclose((points + 4.0) / 0.5 % 1.0, 0.5)
    assert len(points) == pytest.approx(math.pi * 64, rel=0.05)


def test_field_grid_keeps_only_the_support_of_the_weight():
    points = field_grid(3, 8.0, weight=plane_weight(3, 8.0, 0.5))
    assert np.all(np.abs(points[:, 0]) < 0.5)
    assert len(points) > 0


def test_field_grid_caps():
    with pytest.raises(BudgetError):
        field_grid(2, 512.0)
    with pytest.raises(BudgetError):
        field_grid(3, 64.0)
    with pytest.raises(DomainError):
        field_grid(4, 2.0)


def grid_field(recipe, d, R, spacing=0.5):
    points = field_grid(d, R, spacing)
    f = make_profile(d, recipe, 1.0 / (4 * R))
    return with_spacing(extend(f, points), spacing)


def test_unit_weight_norm_is_the_riemann_sum():
    field = grid_field(constant_recipe(2), 2, 8.0)
    expected = math.sqrt(np.sum(np.abs(field.values) ** 2) * 0.25)
    assert weighted_norm(field, uniform_weight(2, 8.0, 0.5), 2) == pytest.approx(expected, rel=1e-12)
    assert weighted_norm(field, uniform_weight(2, 8.0, 0.25), 2) == pytest.approx(expected, rel=1e-12)


def test_zero_weight_norm_vanishes():
    field = grid_field(constant_recipe(2), 2, 8.0)
    zero = SampledWeight(2, [-8.0, -8.0], 0.5, np.zeros((32, 32)))
    assert weighted_norm(field, zero, 3) == 0.0


def test_weighted_norm_rejects_incompatible_grids():
    field = grid_field(constant_recipe(2), 2, 4.0)
    with pytest.raises(PreconditionError) as info:
        weighted_norm(field, uniform_weight(2, 4.0, 0.3), 2)
    assert info.value.parameter == "spacing"
    scattered = FieldSample(field.points, field.values, field.R, field.h_omega)
    with pytest.raises(PreconditionError):
        weighted_norm(scattered, uniform_weight(2, 4.0, 0.5), 2)


def test_cantor_weighted_norm_is_stable_under_refinement():
    R = 32.0
    weight = cantor_weight(2, 2, 0.25, 3, R)
    recipe = cap_recipe(2, [0.25], 0.25)
    points = field_grid(2, R, 0.5, weight=weight)
    coarse = make_profile(2, recipe, 1.0 / (4 * R))
    fine = make_profile(2, recipe, 1.0 / (8 * R))
    a = weighted_norm(with_spacing(extend(coarse, points), 0.5), weight, 3)
    b = weighted_norm(with_spacing(extend(fine, points), 0.5), weight, 3)
    assert a > 0
    assert a == pytest.approx(b, rel=0.02)


def test_theorem_exponents():
    assert theorem_exponent(2, 2, 2) == Fraction(1, 2)
    assert theorem_exponent(3, 3, 2) == 0
    assert theorem_exponent(3, 2, 3) == Fraction(1, 2)
    with pytest.raises(DomainError):
        theorem_exponent(2, 3, 1)


def test_scaling_needs_four_radii():
    with pytest.raises(DomainError):
        scaling_experiment(constant_recipe(2), lambda R: uniform_weight(2, R, 0.5), 2, 2, [8, 16, 32])


def test_local_l2_growth_is_at_most_square_root():
    result = scaling_experiment(
        random_smooth_recipe(2, seed=3), lambda R: uniform_weight(2, R, 0.5), 2, 2, [8, 16, 32, 64]
    )
    assert result.exponent == Fraction(1, 2)
    assert result.slope <= 0.6
    assert result.passed
    assert [row["R"] for row in result.rows()] == [8.0, 16.0, 32.0, 64.0]


def test_slab_weighted_l3_norm_stays_bounded_in_space():
    result = scaling_experiment(
        constant_recipe(3), lambda R: plane_weight(3, R, 0.5), 3, 2, [8, 16, 32, 64]
    )
    assert result.exponent == 0
    assert result.slope <= 0.15
    assert result.passed


def test_cap_translation_does_not_change_the_growth():
    radii = [16, 32, 64, 128]
    slopes = [
        scaling_experiment(cap_recipe(2, [c], 0.25), lambda R: uniform_weight(2, R, 0.5), 2, 2, radii).slope
        for c in (0.0, 0.25)
    ]
    assert abs(slopes[0] - slopes[1]) < 0.05


def test_norm_at_radius_is_zero_without_support():
    empty = SampledWeight(2, [100.0, 100.0], 0.5, np.ones((4, 4)))
    assert norm_at_radius(constant_recipe(2), empty, 2, 8.0) == 0.0
