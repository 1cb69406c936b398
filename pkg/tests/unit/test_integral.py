"""Unit tests for the seeded Monte Carlo engine and the mean-value and Poisson formulas"""

import numpy as np
import pytest

from almansi_core.errors import DomainError
from almansi_core.integral import (
    CHUNK_SIZE, MCEstimate, MeanValueFormula, PoissonFormula, SampleAccumulator, mean_value_check,
    monte_carlo, poisson_check, poisson_kernel, sample_s3_batch,
)
from almansi_core.poly import QPolynomial
from almansi_core.quat import Quaternion
from almansi_core.slices import QPoint
from almansi_core.stem import IndexSet

SAMPLES = 20_000


def within(lhs: Quaternion, estimate: MCEstimate, sigmas: float = 5.0) -> bool:
    return estimate.residual(lhs) <= max(sigmas * estimate.stderr, 1e-3)


@pytest.fixture
def poly2():
    return QPolynomial(2, [((2, 1), Quaternion(0.5, -0.3, 0.2, 0.1)), ((1, 0), Quaternion(1.0)),
                           ((0, 2), Quaternion(0.0, 0.4, 0.0, -0.7))])


@pytest.fixture
def centre():
    return QPoint.of([Quaternion(0.2, -0.1, 0.3, 0.1), Quaternion(-0.4, 0.2, 0.0, 0.5)])


class TestSampling:
    def test_points_on_the_sphere(self):
        xi = sample_s3_batch(np.random.default_rng(0), (100, 2))
        assert xi.shape == (100, 2, 4)
        assert np.allclose(np.linalg.norm(xi, axis=-1), 1.0)

    def test_poisson_kernel(self):
        xi = sample_s3_batch(np.random.default_rng(1), 50)
        assert np.array_equal(poisson_kernel(np.zeros(4), xi), np.ones(50))
        x = np.array([0.5, 0.0, 0.0, 0.0])
        kernel = poisson_kernel(x, np.array([[1.0, 0.0, 0.0, 0.0]]))
        assert kernel[0] == pytest.approx(0.75 / 0.0625)


class TestMonteCarlo:
    def test_worker_count_does_not_change_the_estimate(self):
        def integrand(xi):
            return xi[:, 0, :] ** 2

        nsamples = 2 * CHUNK_SIZE + 17
        serial = monte_carlo(integrand, 1, nsamples, seed=3, workers=1)
        threaded = monte_carlo(integrand, 1, nsamples, seed=3, workers=3)
        assert serial == threaded
        assert serial.samples == nsamples

    def test_seed_changes_the_estimate(self):
        def integrand(xi):
            return xi[:, 0, :]
        assert monte_carlo(integrand, 1, 1000, seed=1).value != monte_carlo(integrand, 1, 1000, seed=2).value

    def test_constant_integrand(self):
        def integrand(xi):
            out = np.zeros((xi.shape[0], 4))
            out[:, 0] = 2.0
            return out
        estimate = monte_carlo(integrand, 2, 500, seed=0)
        assert estimate.value == Quaternion(2.0)
        assert estimate.stderr == 0.0

    def test_sphere_moments(self):
        estimate = monte_carlo(lambda xi: xi[:, 0, :] ** 2, 1, SAMPLES, seed=7)
        assert within(Quaternion(0.25, 0.25, 0.25, 0.25), estimate)

    def test_needs_samples(self):
        with pytest.raises(DomainError):
            monte_carlo(lambda xi: xi[:, 0, :], 1, 0, seed=0)


class TestEstimate:
    def test_acceptance_band(self):
        estimate = MCEstimate(Quaternion(1.0, 0.0, 0.0, 0.01), stderr=1e-4, samples=100, seed=0)
        assert estimate.residual(Quaternion(1.0)) == pytest.approx(0.01)
        assert estimate.tolerance(1e-3, 3.0) == 1e-3
        assert not estimate.accepts(Quaternion(1.0))
        assert estimate.accepts(Quaternion(1.0, 0.0, 0.0, 0.0095))
        assert estimate.to_document()["samples"] == 100

    def test_accumulator_merge(self):
        values = np.arange(16.0).reshape(4, 4)
        merged = SampleAccumulator().add(values[:2]).merge(SampleAccumulator().add(values[2:]))
        single = SampleAccumulator().add(values)
        assert merged.count == 4
        assert merged.estimate(0) == single.estimate(0)

    def test_empty_accumulator(self):
        with pytest.raises(DomainError):
            SampleAccumulator().estimate(0)


class TestMeanValue:
    @pytest.mark.parametrize("formula", [MeanValueFormula.COMPONENTS, MeanValueFormula.FIRST, MeanValueFormula.SECOND])
    @pytest.mark.parametrize("m", [1, 2])
    def test_formulas(self, poly2, centre, formula, m):
        lhs, estimate = mean_value_check(poly2, centre, [0.5, 0.4], m, formula, SAMPLES, seed=11,
                                         K=IndexSet.of(2, [1]))
        assert within(lhs, estimate)

    def test_first_and_second_share_the_expectation_for_one_variable(self, poly2, centre):
        _, first = mean_value_check(poly2, centre, [0.5, 0.4], 1, "first", SAMPLES, seed=5)
        _, second = mean_value_check(poly2, centre, [0.5, 0.4], 1, "second", SAMPLES, seed=5)
        assert first.residual(second.value) < 1e-9

    def test_real_centre_formula(self, poly2):
        a = QPoint.of([Quaternion(0.2, -0.1, 0.3, 0.1), Quaternion(-0.4)])
        lhs, estimate = mean_value_check(poly2, a, [0.5, 0.4], 1, MeanValueFormula.REAL_CENTRE, SAMPLES,
                                         seed=2, H=IndexSet.of(2, [2]))
        assert within(lhs, estimate)

    def test_real_centre_needs_real_coordinates(self, poly2, centre):
        with pytest.raises(DomainError):
            mean_value_check(poly2, centre, [0.5, 0.4], 1, "H", 100, seed=0, H=IndexSet.of(2, [2]))

    def test_radii_checked(self, poly2, centre):
        with pytest.raises(DomainError):
            mean_value_check(poly2, centre, [0.5], 2, "first", 100, seed=0)
        with pytest.raises(DomainError):
            mean_value_check(poly2, centre, [0.5, -1.0], 2, "first", 100, seed=0)


class TestPoisson:
    @pytest.mark.parametrize("formula", list(PoissonFormula))
    def test_formulas(self, poly2, centre, formula):
        x = [Quaternion(0.2, 0.1, -0.3, 0.0), Quaternion(-0.1, 0.0, 0.2, 0.25)]
        lhs, estimate = poisson_check(poly2, centre, [0.5, 0.4], x, 2, formula, SAMPLES, seed=19,
                                      K=IndexSet.of(2, [2]))
        assert within(lhs, estimate)

    @pytest.mark.parametrize("poisson_formula,mean_formula", [
        (PoissonFormula.FIRST, MeanValueFormula.FIRST),
        (PoissonFormula.SECOND, MeanValueFormula.SECOND),
        (PoissonFormula.COMPONENTS, MeanValueFormula.COMPONENTS),
    ])
    def test_origin_reduces_to_mean_value(self, poly2, centre, poisson_formula, mean_formula):
        origin = [Quaternion(), Quaternion()]
        kernel_lhs, kernel = poisson_check(poly2, centre, [0.5, 0.4], origin, 2, poisson_formula, 3000, seed=4,
                                           K=IndexSet.of(2, [1, 2]))
        mean_lhs, mean = mean_value_check(poly2, centre, [0.5, 0.4], 2, mean_formula, 3000, seed=4,
                                          K=IndexSet.of(2, [1, 2]))
        assert kernel == mean
        assert kernel_lhs == mean_lhs

    def test_points_inside_the_ball(self, poly2, centre):
        with pytest.raises(DomainError):
            poisson_check(poly2, centre, [0.5, 0.4], [Quaternion(1.0), Quaternion()], 2, "first", 100, seed=0)
        with pytest.raises(DomainError):
            poisson_check(poly2, centre, [0.5, 0.4], [Quaternion()], 2, "first", 100, seed=0)
