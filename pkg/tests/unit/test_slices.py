"""Unit tests for points of H^n, induced slice functions and sliceness"""

import math

import numpy as np
import pytest

from almansi_core.errors import DomainError, InputFormatError
from almansi_core.poly import QPolynomial, poly_slice_function, poly_to_stem
from almansi_core.quat import I, J, K, Quaternion
from almansi_core.slices import (
    QPoint, SliceFunction, circularity_residual, imaginary_part, slice_eval, slice_eval_batch, slice_eval_closure,
    slice_product, sliceness_check, unit_products,
)
from almansi_core.stem import IndexSet, make_builtin_stem
from almansi_core.suites import random_point, random_polynomial


@pytest.fixture
def point():
    return QPoint.of([Quaternion(0.3, 0.5, -0.2, 0.4), Quaternion(-0.7, 0.1, 0.9, 0.3)])


def close(a: Quaternion, b: Quaternion, tol: float = 1e-12) -> bool:
    return (a - b).norm() <= tol * max(1.0, b.norm())


class TestQPoint:
    def test_document_round_trip(self, point):
        assert QPoint.from_document(point.to_document(), 2) == point

    def test_wrong_dimension(self, point):
        with pytest.raises(InputFormatError):
            QPoint.from_document(point.to_document(), 3)
        with pytest.raises(InputFormatError):
            QPoint.from_document([[1.0, 2.0]])

    def test_complex_point(self, point):
        z = point.complex_point()
        assert z.alphas == (0.3, -0.7)
        assert z.betas[0] == pytest.approx(np.sqrt(0.25 + 0.04 + 0.16))

    def test_with_unit_keeps_alpha_and_beta(self, point):
        moved = point.with_unit(1, J)
        assert moved.coords[0].w == pytest.approx(0.3)
        assert moved.coords[0].imag_norm() == pytest.approx(point.coords[0].imag_norm())
        assert moved.coords[1] == point.coords[1]


class TestSliceEvaluation:
    def test_unit_products_are_ordered(self):
        table = unit_products([I, J])
        assert Quaternion(*table[3]) == K
        assert Quaternion(*table[0]) == Quaternion(1.0)

    def test_monomial_slice_function_is_the_variable(self, point):
        f = poly_slice_function(QPolynomial.variable(2, 2))
        assert close(slice_eval(f, point), point.coords[1])

    def test_polynomial_matches_ordered_evaluation(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            P = random_polynomial(rng, 3, 4, 4)
            f = poly_slice_function(P)
            x = random_point(rng, 3, 0.1, 2.0)
            assert close(slice_eval(f, x), P.evaluate(x), 1e-11)
            assert close(slice_eval_closure(f, x), P.evaluate(x), 1e-11)

    def test_batch_matches_pointwise(self):
        rng = np.random.default_rng(5)
        P = random_polynomial(rng, 2, 3, 3)
        f = poly_slice_function(P)
        points = np.stack([random_point(rng, 2, 0.1, 2.0).to_array() for _ in range(6)])
        batch = slice_eval_batch(f, points)
        for row, p in zip(batch, points):
            assert close(Quaternion(*row), P.evaluate(QPoint.from_array(p)), 1e-11)

    def test_batch_without_closed_form(self, point):
        g = SliceFunction(make_builtin_stem("exp", 2, 1))
        batch = slice_eval_batch(g, np.stack([point.to_array()]))
        assert close(Quaternion(*batch[0]), slice_eval(g, point))

    def test_slice_product_of_variables(self, point):
        x1 = poly_slice_function(QPolynomial.variable(2, 1))
        x2 = poly_slice_function(QPolynomial.variable(2, 2))
        product = slice_eval(slice_product(x1, x2), point)
        assert close(product, point.coords[0] * point.coords[1])

    def test_spherical_derivative_of_x_exp_x(self):
        alpha, beta = 0.4, 1.3
        x = QPoint.of([Quaternion(alpha, 0.6 * beta, 0.0, -0.8 * beta)])
        composite = slice_product(poly_slice_function(QPolynomial.variable(1, 1)),
                                  SliceFunction(make_builtin_stem("exp", 1, 1)))
        value = slice_eval(composite.spherical_derivative(IndexSet.full(1)), x)
        expected = math.exp(alpha) * (math.cos(beta) + alpha / beta * math.sin(beta))
        assert close(value, Quaternion(expected))

    def test_imaginary_part(self, point):
        assert close(slice_eval(imaginary_part(2, 1), point), point.coords[0].im)

    def test_dimension_mismatch(self, point):
        with pytest.raises(DomainError):
            slice_eval(poly_slice_function(QPolynomial.variable(3, 1)), point)


class TestCircularityAndSliceness:
    def test_function_of_x2_is_circular_in_x1(self, point):
        f = poly_slice_function(QPolynomial.variable(2, 2, 2))
        assert circularity_residual(f, 1, point, K) < 1e-12
        assert circularity_residual(f, 2, point, K) > 0.1

    def test_circularity_needs_unit_imaginary(self, point):
        f = poly_slice_function(QPolynomial.variable(2, 2))
        with pytest.raises(DomainError):
            circularity_residual(f, 1, point, Quaternion(0.0, 2.0))
        with pytest.raises(DomainError):
            circularity_residual(f, 3, point, I)

    def test_ordered_product_is_slice_in_first_variable_only(self):
        F = poly_to_stem(QPolynomial(2, [((1, 1), Quaternion(1.0))]))
        assert sliceness_check(F, IndexSet.of(2, [1]))
        assert not sliceness_check(F, IndexSet.of(2, [2]))
        assert not sliceness_check(F, IndexSet.of(2, [1]), circular=True)

    def test_circular_sliceness(self):
        F = poly_to_stem(QPolynomial.variable(2, 2, 3))
        assert sliceness_check(F, IndexSet.of(2, [1]), circular=True)
        assert not sliceness_check(F, IndexSet.of(2, [2]), circular=True)
