import math

import numpy as np
import pytest

from fractal.energy import ball_masses, energy, frostman_check, mattila_integral
from fractal.fourier import decay_fit, default_node_count, fourier, spherical_average
from fractal.measures import (
    atomic_measure,
    cantor_measure,
    point_mass,
    translate,
    valid_radius_max,
)
from numerics.errors import BudgetError, DomainError, ResolutionError
from numerics.sphere import SphereRuleCache


@pytest.fixture(scope="module")
def four_corner():
    return cantor_measure(2, 2, 0.25, 5)


def test_cantor_measure_atoms_and_alpha():
    mu = cantor_measure(1, 2, 1 / 3, 2)
    assert mu.size == 4
    assert np.allclose(mu.atoms.ravel(), [0.0, 2 / 9, 2 / 3, 8 / 9])
    assert np.allclose(mu.masses, 0.25)
    assert mu.claimed_alpha == pytest.approx(math.log(2) / math.log(3))
    assert mu.atom_scale == pytest.approx(1 / 9)


def test_four_corner_measure_is_one_dimensional(four_corner):
    assert four_corner.size == 4**5
    assert four_corner.claimed_alpha == pytest.approx(1.0)
    assert four_corner.masses.sum() == pytest.approx(1.0)


@pytest.mark.parametrize(
    "kwargs, parameter",
    [
        ({"d": 2, "b": 3, "rho": 0.5, "n": 2}, "rho"),
        ({"d": 2, "b": 1, "rho": 0.25, "n": 2}, "b"),
        ({"d": 2, "b": 2, "rho": 0.25, "n": 0}, "n"),
        ({"d": 0, "b": 2, "rho": 0.25, "n": 2}, "d"),
    ],
)
def test_cantor_measure_rejects_bad_parameters(kwargs, parameter):
    with pytest.raises(DomainError) as excinfo:
        cantor_measure(**kwargs)
    assert excinfo.value.parameter == parameter


def test_cantor_measure_atom_cap():
    with pytest.raises(BudgetError):
        cantor_measure(3, 2, 0.25, 8)


@pytest.mark.parametrize(
    "atoms, masses",
    [
        ([[0.0], [1.0]], [0.5, 0.4]),
        ([[0.0], [1.0]], [1.5, -0.5]),
        ([[0.0], [1.0]], [1.0]),
    ],
)
def test_atomic_measure_validation(atoms, masses):
    with pytest.raises(DomainError):
        atomic_measure(atoms, masses, 0.0)


def test_fourier_of_point_mass_has_unit_modulus():
    mu = point_mass(3, at=[0.3, -1.0, 2.0])
    xi = np.random.default_rng(0).normal(size=(10, 3)) * 50
    assert np.allclose(np.abs(fourier(mu, xi)), 1.0)


def test_fourier_modulus_is_translation_invariant(four_corner):
    xi = np.random.default_rng(1).normal(size=(25, 2)) * 40
    shifted = translate(four_corner, [3.0, -7.5])
    assert np.allclose(np.abs(fourier(shifted, xi)), np.abs(fourier(four_corner, xi)), atol=1e-12)


def test_fourier_rejects_wrong_dimension(four_corner):
    with pytest.raises(DomainError):
        fourier(four_corner, [1.0, 2.0, 3.0])


def test_spherical_average_of_point_mass_is_circle_length():
    assert spherical_average(point_mass(2), 17.0) == pytest.approx(2 * math.pi, rel=1e-12)


def test_spherical_average_needs_resolving_nodes(four_corner):
    with pytest.raises(ResolutionError) as excinfo:
        spherical_average(four_corner, 50.0, nodes=64)
    assert excinfo.value.parameter == "quad_nodes"


def test_point_mass_does_not_decay():
    fit = decay_fit(point_mass(2), 1.0, 64.0, 6)
    assert abs(fit.fitted_beta) < 1e-9
    assert len(fit.rows()) == 6


def test_four_corner_measure_decays(four_corner):
    fit = decay_fit(four_corner, 8.0, 128.0, 8, threads=2)
    assert fit.fitted_beta > 0.3
    assert np.all(np.diff(fit.radii) > 0)


def test_decay_fit_builds_its_rules_up_front(four_corner):
    cache = SphereRuleCache()
    fit = decay_fit(four_corner, 8.0, 64.0, 4, threads=2, cache=cache)
    counts = {default_node_count(2, R, four_corner.diameter) for R in fit.radii}
    assert set(cache.cache) == {(2, n) for n in counts}
    assert np.allclose(fit.averages, decay_fit(four_corner, 8.0, 64.0, 4).averages)


def test_valid_radius_max():
    assert valid_radius_max(cantor_measure(2, 2, 0.25, 3)) == pytest.approx(32.0)
    assert valid_radius_max(point_mass(2)) is None


def test_decay_fit_refuses_radii_beyond_atom_scale():
    with pytest.raises(DomainError) as excinfo:
        decay_fit(cantor_measure(2, 2, 0.25, 3), 4.0, 64.0, 4)
    assert excinfo.value.parameter == "R_max"


def test_decay_fit_needs_four_radii():
    with pytest.raises(DomainError):
        decay_fit(point_mass(2), 1.0, 8.0, 3)


def test_ball_masses_use_open_balls():
    mu = atomic_measure([[0.0], [1.0]], [0.5, 0.5], 0.0)
    masses = ball_masses(mu, [1.0, 1.5], np.array([[0.0]]))
    assert masses[:, 0].tolist() == [0.5, 1.0]


def test_frostman_check_passes_for_declared_dimension(four_corner):
    radii = np.geomspace(four_corner.atom_scale, 1.0, 6)
    certificate = frostman_check(four_corner, radii, constant=4.0)
    assert certificate.passed
    assert certificate.worst_ratio >= 1.0 - 1e-12


def test_frostman_check_fails_for_overstated_dimension(four_corner):
    radii = np.geomspace(four_corner.atom_scale, 1.0, 6)
    certificate = frostman_check(four_corner, radii, alpha=1.5, constant=4.0)
    assert not certificate.passed
    assert certificate.to_dict()["pass"] is False


def test_frostman_check_rejects_nonpositive_radius(four_corner):
    with pytest.raises(DomainError):
        frostman_check(four_corner, [0.0, 0.5])


def test_energy_two_atoms():
    assert energy(atomic_measure([[0.0], [1.0]], [0.5, 0.5], 0.0), 0.7) == pytest.approx(0.5)
    assert energy(atomic_measure([[0.0], [2.0]], [0.5, 0.5], 0.0), 1.0) == pytest.approx(0.25)


def test_energy_is_translation_invariant(four_corner):
    shifted = translate(four_corner, [10.0, 10.0])
    assert energy(shifted, 0.5) == pytest.approx(energy(four_corner, 0.5), rel=1e-9)


def test_energy_rejects_nonpositive_exponent(four_corner):
    with pytest.raises(DomainError):
        energy(four_corner, 0.0)


def test_mattila_integral_of_point_mass():
    result = mattila_integral(point_mass(2), 1.0, 3.0)
    assert result.value == pytest.approx(16 * math.pi**2, rel=1e-10)
    assert result.energy == 0.0
    assert result.ratio is None


def test_mattila_integral_of_cantor_measure():
    result = mattila_integral(cantor_measure(2, 2, 0.25, 3), 0.5, 4.0)
    assert result.value > 0
    assert result.energy > 0
    assert result.ratio > 0


def test_mattila_integral_closed_form_for_point_mass():
    result = mattila_integral(point_mass(2), 1.0, 2.0)
    assert result.value == pytest.approx(6 * math.pi**2, rel=1e-10)


def test_mattila_integral_refuses_radii_beyond_atom_scale():
    mu = cantor_measure(2, 2, 0.25, 2)
    assert valid_radius_max(mu) == pytest.approx(8.0)
    with pytest.raises(DomainError) as excinfo:
        mattila_integral(mu, 0.5, 32.0)
    assert excinfo.value.parameter == "R_max"


def test_mattila_integral_is_nondecreasing_in_R_max():
    mu = cantor_measure(2, 2, 0.25, 3)
    values = [mattila_integral(mu, 0.5, R_max).value for R_max in (2.0, 4.0, 8.0, 16.0)]
    assert all(later >= earlier for earlier, later in zip(values, values[1:]))
    assert values[-1] > values[0]


def test_mattila_to_energy_ratio_stays_bounded_in_three_dimensions():
    mu = cantor_measure(3, 2, 0.3, 3)
    assert mu.claimed_alpha > 1.5
    assert valid_radius_max(mu) > 16.0
    ratios = [mattila_integral(mu, 1.0, R_max).ratio for R_max in (4.0, 8.0, 16.0)]
    assert all(ratio > 0 for ratio in ratios)
    assert max(ratios) / min(ratios) <= 50.0


def test_middle_thirds_energy_below_dimension_is_stable():
    energies = [energy(cantor_measure(1, 2, 1 / 3, n), 0.3) for n in (6, 7, 8)]
    for earlier, later in zip(energies, energies[1:]):
        assert later / earlier == pytest.approx(1.0, abs=0.1)


def test_middle_thirds_energy_above_dimension_grows():
    energies = [energy(cantor_measure(1, 2, 1 / 3, n), 1.0) for n in (6, 7, 8)]
    for earlier, later in zip(energies, energies[1:]):
        assert later >= 1.2 * earlier


def test_energy_stays_bounded_while_frostman_check_passes():
    energies = []
    for n in (3, 4, 5):
        mu = cantor_measure(2, 2, 0.25, n)
        assert frostman_check(mu, np.geomspace(mu.atom_scale, 1.0, 6), constant=4.0).passed
        energies.append(energy(mu, 0.5))
    assert max(energies) <= 1.5 * min(energies)
