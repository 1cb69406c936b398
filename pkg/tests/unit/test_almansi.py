"""Unit tests for Almansi components, decompositions and reconstructions"""

import math

import numpy as np
import pytest

from almansi_core.almansi import (
    ReconstructionMode, almansi_component, almansi_component_explicit, almansi_decompose,
    almansi_decompose_polynomial, almansi_reconstruct, component_recursion_residual, component_stem,
    crf_component, crf_component_map, recover_stem_block, reduced_ordered_reconstruct, stem_reconstruct,
)
from almansi_core.errors import DomainError, ModeError, SingularPointError
from almansi_core.poly import QPolynomial, poly_component_closed_form, poly_slice_function, to_real_poly_map
from almansi_core.quat import Quaternion, split
from almansi_core.slices import QPoint, SliceFunction, slice_eval, slice_product
from almansi_core.stem import ComplexPoint, IndexSet, all_subsets, make_builtin_stem
from almansi_core.suites import random_point, random_polynomial


@pytest.fixture
def x1x2():
    return QPolynomial(2, [((1, 1), Quaternion(1.0))])


@pytest.fixture
def point():
    return QPoint.of([Quaternion(0.3, 0.5, -0.2, 0.4), Quaternion(-0.7, 0.1, 0.9, 0.3)])


def close(a: Quaternion, b: Quaternion, tol: float = 1e-10) -> bool:
    return (a - b).norm() <= tol * max(1.0, b.norm())


class TestComponents:
    def test_components_of_x1x2(self, x1x2, point):
        f = poly_slice_function(x1x2)
        full = IndexSet.full(2)
        a1, a2 = point.coords[0].w, point.coords[1].w
        expected = {
            0: Quaternion(1.0),
            1: Quaternion(2 * a1),
            2: Quaternion(2 * a2),
            3: Quaternion(4 * a1 * a2),
        }
        for K in full.subsets():
            assert close(slice_eval(almansi_component(f, full, K), point), expected[K.bits])

    def test_empty_h_returns_the_function(self, x1x2):
        F = poly_slice_function(x1x2).stem
        assert component_stem(F, IndexSet.empty(2), IndexSet.empty(2)) is F

    def test_k_outside_h(self, x1x2):
        f = poly_slice_function(x1x2)
        with pytest.raises(DomainError):
            almansi_component(f, IndexSet.of(2, [1]), IndexSet.of(2, [1, 2]))

    def test_explicit_formula_matches_iteration(self):
        rng = np.random.default_rng(21)
        z = ComplexPoint.of([(0.4, 0.8), (-0.2, 1.5), (0.9, 0.3)])
        for _ in range(5):
            F = poly_slice_function(random_polynomial(rng, 3, 4, 4)).stem
            for H in all_subsets(3):
                for K in H.subsets():
                    explicit = almansi_component_explicit(F, H, K, z, use_closure=True)
                    iterated = component_stem(F, H, K)(z)
                    assert explicit.max_abs_diff(iterated) < 1e-10 * max(1.0, iterated.max_norm())

    def test_explicit_formula_singular(self, x1x2):
        F = poly_slice_function(x1x2).stem
        z = ComplexPoint.of([(0.4, 0.0), (0.1, 1.0)])
        with pytest.raises(SingularPointError):
            almansi_component_explicit(F, IndexSet.of(2, [1]), IndexSet.empty(2), z)

    def test_closed_form_components_on_the_real_axis(self, x1x2):
        f = poly_slice_function(x1x2)
        component = almansi_component(f, IndexSet.full(2), IndexSet.of(2, [1]))
        assert close(slice_eval(component, QPoint.of([2.0, -1.0])), Quaternion(4.0))

    def test_closure_only_component_is_singular_on_the_real_axis(self):
        f = SliceFunction(make_builtin_stem("exp", 1, 1))
        component = almansi_component(f, IndexSet.full(1), IndexSet.empty(1))
        with pytest.raises(SingularPointError):
            slice_eval(component, QPoint.of([0.5]))


class TestDecomposition:
    def test_slice_reconstruction_for_every_h(self):
        rng = np.random.default_rng(13)
        for _ in range(4):
            P = random_polynomial(rng, 3, 4, 4)
            f = poly_slice_function(P)
            x = random_point(rng, 3, 0.1, 2.0)
            for H in all_subsets(3):
                dec = almansi_decompose(f, H)
                assert len(dec.components) == 1 << len(H)
                assert close(almansi_reconstruct(dec, x), P.evaluate(x), 1e-9)

    def test_exponential_times_polynomial(self):
        x = QPoint.of([Quaternion(0.4, 0.3, -0.6, 0.2), Quaternion(-0.5, 0.2, 0.7, 0.1),
                       Quaternion(0.8, -0.3, 0.4, 0.9)])
        f = slice_product(SliceFunction(make_builtin_stem("exp", 3, 1)),
                          poly_slice_function(QPolynomial(3, [((0, 1, 3), Quaternion(1.0))])))
        H = IndexSet.of(3, [2, 3])
        dec = almansi_decompose(f, H)
        s1 = split(x.coords[0])
        exp_x1 = Quaternion(math.exp(s1.alpha) * math.cos(s1.beta)) + s1.j * (math.exp(s1.alpha) * math.sin(s1.beta))
        a2 = x.coords[1].w
        s3 = split(x.coords[2])
        expected = exp_x1 * (2 * a2 * 4 * s3.alpha * (s3.alpha ** 2 - s3.beta ** 2))
        assert close(slice_eval(dec.component(H), x), expected)
        value = exp_x1 * x.coords[1] * x.coords[2] * x.coords[2] * x.coords[2]
        assert close(almansi_reconstruct(dec, x), value)

    def test_ordered_reconstruction(self, x1x2, point):
        dec = almansi_decompose(poly_slice_function(x1x2), IndexSet.full(2))
        ordered = almansi_reconstruct(dec, point, ReconstructionMode.ORDERED)
        assert close(ordered, point.coords[0] * point.coords[1])
        assert close(almansi_reconstruct(dec, point, "ordered"), ordered, 0.0)

    def test_ordered_mode_needs_an_interval(self, x1x2, point):
        dec = almansi_decompose(poly_slice_function(x1x2), IndexSet.of(2, [2]))
        with pytest.raises(ModeError):
            almansi_reconstruct(dec, point, ReconstructionMode.ORDERED)
        assert close(almansi_reconstruct(dec, point), point.coords[0] * point.coords[1])

    def test_polynomial_document(self, x1x2):
        document = almansi_decompose_polynomial(x1x2, IndexSet.full(2)).to_document()
        assert document["H"] == [1, 2]
        assert [document["components"][str(b)]["expanded"] for b in range(4)] == ["1", "2*a1", "2*a2", "4*a1*a2"]

    def test_closure_decomposition_is_numeric(self):
        f = SliceFunction(make_builtin_stem("exp", 1, 1))
        document = almansi_decompose(f, IndexSet.full(1)).to_document()
        assert document["components"] == {"0": "numeric", "1": "numeric"}

    def test_dimension_mismatch(self, x1x2):
        with pytest.raises(DomainError):
            almansi_decompose(poly_slice_function(x1x2), IndexSet.full(3))


class TestReducedReconstruction:
    def test_slice_in_first_variable(self, x1x2, point):
        dec = almansi_decompose(poly_slice_function(x1x2), IndexSet.of(2, [1]))
        assert close(reduced_ordered_reconstruct(dec, point), point.coords[0] * point.coords[1])

    def test_requires_sliceness(self, x1x2, point):
        dec = almansi_decompose(poly_slice_function(x1x2), IndexSet.full(2))
        with pytest.raises(DomainError):
            reduced_ordered_reconstruct(dec, point)

    def test_function_of_the_last_variable(self, point):
        P = QPolynomial(2, [((0, 3), Quaternion(0.5, 1.0, 0.0, -1.0))])
        dec = almansi_decompose(poly_slice_function(P), IndexSet.full(2))
        assert close(reduced_ordered_reconstruct(dec, point), P.evaluate(point))


class TestStemIdentities:
    @pytest.fixture
    def stem(self):
        return poly_slice_function(random_polynomial(np.random.default_rng(17), 3, 4, 4)).stem

    @pytest.fixture
    def z(self):
        return ComplexPoint.of([(0.4, 0.8), (-0.2, 1.5), (0.9, 0.3)])

    def test_stem_reconstruction(self, stem, z):
        for H in all_subsets(3):
            assert stem_reconstruct(stem, H, z).max_abs_diff(stem(z)) < 1e-9 * max(1.0, stem(z).max_norm())

    def test_component_recursion(self, stem, z):
        H = IndexSet.of(3, [1])
        for K in H.subsets():
            assert component_recursion_residual(stem, H, K, 3, z) < 1e-9
        with pytest.raises(DomainError):
            component_recursion_residual(stem, H, IndexSet.empty(3), 1, z)

    def test_recover_stem_block(self, stem, z):
        H = IndexSet.of(3, [1, 2])
        for K in H.subsets():
            lhs, rhs = recover_stem_block(stem, H, K, z)
            assert lhs.max_abs_diff(rhs) < 1e-9 * max(1.0, lhs.max_norm())


class TestCRFCharacterization:
    @pytest.mark.parametrize("m", [1, 2])
    def test_iterated_crf_gives_components(self, m):
        P = random_polynomial(np.random.default_rng(31), 2, 4, 4)
        H = IndexSet.interval(2, m)
        for K in H.subsets():
            expected = to_real_poly_map(poly_component_closed_form(P, H, K))
            assert (crf_component_map(P, m, K) - expected).max_coeff() < 1e-10

    def test_first_variable_values(self, point):
        x1 = QPolynomial.variable(2, 1)
        assert close(crf_component(x1, 1, IndexSet.empty(2), point), Quaternion(1.0))
        assert close(crf_component(x1, 1, IndexSet.of(2, [1]), point), Quaternion(2 * point.coords[0].w))

    def test_k_outside_interval(self, x1x2):
        with pytest.raises(DomainError):
            crf_component_map(x1x2, 1, IndexSet.of(2, [2]))
