import math

import numpy as np
import pytest

from numerics.errors import BudgetError, DomainError, PreconditionError, ResolutionError
from numerics.fitting import fit_power_law
from numerics.rng import make_generator, random_points_in_ball
from numerics.sphere import SphereRuleCache, required_nodes, sphere_rule, surface_area


def test_error_hierarchy_names_parameter():
    for error_type in (DomainError, ResolutionError, BudgetError):
        error = error_type("bad value", "R")
        assert isinstance(error, PreconditionError)
        assert isinstance(error, ValueError)
        assert error.parameter == "R"


def test_fit_power_law_exact_slope():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    fit = fit_power_law(x, 3.0 * x**-1.5)
    assert fit.slope == pytest.approx(-1.5, abs=1e-12)
    assert math.exp(fit.intercept) == pytest.approx(3.0)
    assert np.allclose(fit.predict(x), 3.0 * x**-1.5)


def test_fit_power_law_constant_samples():
    fit = fit_power_law([1.0, 2.0, 4.0, 8.0], [5.0] * 4)
    assert fit.slope == 0.0
    assert fit.stderr == 0.0


@pytest.mark.parametrize("y", [[1.0, 0.0, 1.0], [1.0, -2.0, 3.0]])
def test_fit_power_law_rejects_nonpositive(y):
    with pytest.raises(DomainError):
        fit_power_law([1.0, 2.0, 3.0], y)


def test_fit_power_law_needs_points():
    with pytest.raises(DomainError):
        fit_power_law([1.0, 2.0, 4.0], [1.0, 2.0, 4.0], min_points=4)


@pytest.mark.parametrize("d, n", [(2, 64), (2, 101), (3, 500), (3, 2048)])
def test_sphere_rule_weights_and_nodes(d, n):
    rule = sphere_rule(d, n)
    assert rule.nodes.shape == (n, d)
    assert np.allclose(np.linalg.norm(rule.nodes, axis=1), 1.0)
    assert rule.weights.sum() == pytest.approx(surface_area(d))


def test_sphere_rule_integrates_polynomials():
    circle = sphere_rule(2, 64)
    assert np.dot(circle.weights, circle.nodes[:, 0] ** 2) == pytest.approx(math.pi)
    sphere = sphere_rule(3, 4096)
    # integral of z^2 over S^2 is 4*pi/3
    assert np.dot(sphere.weights, sphere.nodes[:, 2] ** 2) == pytest.approx(4 * math.pi / 3, rel=1e-5)


def test_sphere_rule_rejects_other_dimensions():
    with pytest.raises(DomainError):
        sphere_rule(4, 100)


def test_required_nodes():
    assert required_nodes(0.5, 1.0) == 64
    assert required_nodes(100.0, 1.0) == 800
    assert required_nodes(10.0, math.sqrt(2)) == math.ceil(80 * math.sqrt(2))


def test_sphere_rule_cache_reuses_rules():
    cache = SphereRuleCache()
    first = cache.get_rule(2, 128)
    assert cache.get_rule(2, 128) is first
    assert set(cache.get_rules(3, [64, 128])) == {64, 128}


def test_generator_streams_are_reproducible_and_distinct():
    a = make_generator(7, 1).random(5)
    b = make_generator(7, 1).random(5)
    c = make_generator(7, 2).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    with pytest.raises(DomainError):
        make_generator(-1)


def test_random_points_in_ball():
    points = random_points_in_ball(make_generator(3), 200, 3, 16.0)
    assert points.shape == (200, 3)
    assert np.all(np.linalg.norm(points, axis=1) <= 16.0 + 1e-12)
