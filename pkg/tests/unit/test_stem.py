"""Unit tests for index sets, stem functions and the stem algebra"""

import math

import numpy as np
import pytest

from almansi_core.errors import CapabilityError, DomainError, SingularPointError
from almansi_core.poly import QPolynomial, poly_to_stem
from almansi_core.quat import Quaternion
from almansi_core.stem import (
    ComplexPoint, IndexSet, Provenance, StemFunction, all_subsets, conj_monomial_stem, const_stem,
    imaginary_stem, make_builtin_stem, ordered_monomial_stem, stem_cr_residual, stem_parity_residual,
    stem_scale, stem_spherical_derivative, stem_spherical_value, stem_sum, stem_tensor,
)


@pytest.fixture
def z2():
    return ComplexPoint.of([(0.3, 0.7), (-0.4, 1.2)])


class TestIndexSet:
    def test_members_and_label(self):
        H = IndexSet.of(3, [3, 1])
        assert H.bits == 5
        assert H.members == (1, 3)
        assert len(H) == 2
        assert 3 in H and 2 not in H
        assert H.label() == "{1,3}"

    def test_subsets_in_bitmask_order(self):
        H = IndexSet.of(3, [1, 3])
        assert [K.bits for K in H.subsets()] == [0, 1, 4, 5]
        assert len(all_subsets(3)) == 8

    def test_intervals(self):
        assert IndexSet.interval(3, 2).members == (1, 2)
        assert IndexSet.interval(3, 2).is_interval()
        assert IndexSet.empty(3).is_interval()
        assert not IndexSet.of(3, [2]).is_interval()
        assert IndexSet.interval(3, 0) == IndexSet.empty(3)

    def test_set_operations(self):
        A, B = IndexSet.of(3, [1, 2]), IndexSet.of(3, [2, 3])
        assert (A | B).members == (1, 2, 3)
        assert (A & B).members == (2,)
        assert (A - B).members == (1,)
        assert (A ^ B).members == (1, 3)
        assert A.complement().members == (3,)
        assert (A & B).issubset(A)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            IndexSet.of(3, [4])
        with pytest.raises(DomainError):
            IndexSet.interval(2, 3)
        with pytest.raises(DomainError):
            IndexSet(8, 3)
        with pytest.raises(DomainError):
            IndexSet.of(2, [1]) | IndexSet.of(3, [1])


class TestBuiltinStems:
    def test_monomial_components(self, z2):
        F = make_builtin_stem("monomial", 2, 2)
        value = F(z2)
        assert value[0] == Quaternion(-0.4)
        assert value[2] == Quaternion(1.2)
        assert value[1] == Quaternion() and value[3] == Quaternion()

    def test_conj_monomial_and_imaginary(self, z2):
        assert make_builtin_stem("conj_monomial", 2, 1)(z2)[1] == Quaternion(-0.7)
        value = imaginary_stem(2, 1)(z2)
        assert value[0] == Quaternion() and value[1] == Quaternion(0.7)

    def test_constant(self, z2):
        value = make_builtin_stem("constant", 2, Quaternion(1.0, 2.0, 3.0, 4.0))(z2)
        assert value[0] == Quaternion(1.0, 2.0, 3.0, 4.0)
        assert np.count_nonzero(value.comps[1:]) == 0

    def test_exp_has_no_closed_form(self, z2):
        F = make_builtin_stem("exp", 2, 1)
        assert not F.exact
        value = F(z2)
        assert value[0].w == pytest.approx(math.exp(0.3) * math.cos(0.7))
        assert value[1].w == pytest.approx(math.exp(0.3) * math.sin(0.7))
        assert F.support() == frozenset({0, 1})

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            make_builtin_stem("log", 1, 1)
        with pytest.raises(DomainError):
            make_builtin_stem("monomial", 2, 3)

    def test_closure_without_support(self):
        F = StemFunction(1, lambda z: np.zeros((2, 4)), IndexSet.empty(1), Provenance.BUILTIN)
        with pytest.raises(CapabilityError):
            F.support()


class TestStemAlgebra:
    def test_tensor_square_is_z_squared(self):
        z = ComplexPoint.of([(0.5, 2.0)])
        x = make_builtin_stem("monomial", 1, 1)
        value = stem_tensor(x, x)(z)
        assert value[0].w == pytest.approx(0.25 - 4.0)
        assert value[1].w == pytest.approx(2.0)

    def test_tensor_of_two_variables(self, z2):
        F = stem_tensor(make_builtin_stem("monomial", 2, 1), make_builtin_stem("monomial", 2, 2))
        value = F(z2)
        assert value[0].w == pytest.approx(0.3 * -0.4)
        assert value[1].w == pytest.approx(0.7 * -0.4)
        assert value[2].w == pytest.approx(0.3 * 1.2)
        assert value[3].w == pytest.approx(0.7 * 1.2)
        assert F.via_closure(z2).max_abs_diff(value) < 1e-14

    def test_tensor_keeps_support_without_closed_form(self):
        F = stem_tensor(make_builtin_stem("exp", 2, 1), make_builtin_stem("monomial", 2, 2))
        assert not F.exact
        assert F.support() == frozenset({0, 1, 2, 3})

    def test_sum_and_scale(self, z2):
        x1 = make_builtin_stem("monomial", 2, 1)
        doubled = stem_sum([x1, x1])
        assert doubled(z2)[0].w == pytest.approx(0.6)
        scaled = stem_scale(x1, Quaternion(0.0, 1.0))
        assert scaled(z2)[1] == Quaternion(0.0, 0.7)
        with pytest.raises(DomainError):
            stem_sum([])

    def test_spherical_value(self, z2):
        P = QPolynomial(2, [((1, 1), Quaternion(1.0))])
        F = stem_spherical_value(poly_to_stem(P), IndexSet.of(2, [1]))
        value = F(z2)
        assert value[0].w == pytest.approx(0.3 * -0.4)
        assert value[2].w == pytest.approx(0.3 * 1.2)
        assert value[1] == Quaternion() and value[3] == Quaternion()

    def test_spherical_derivative_of_square(self):
        square = poly_to_stem(QPolynomial.variable(1, 1, 2))
        F = stem_spherical_derivative(square, IndexSet.of(1, [1]))
        z = ComplexPoint.of([(0.5, 2.0)])
        assert F(z)[0].w == pytest.approx(1.0)
        assert F.via_closure(z)[0].w == pytest.approx(1.0)
        # the closed form extends to the real axis
        assert F(ComplexPoint.of([(0.5, 0.0)]))[0].w == pytest.approx(1.0)

    def test_spherical_derivative_singular_without_closed_form(self):
        F = stem_spherical_derivative(make_builtin_stem("exp", 1, 1), IndexSet.of(1, [1]))
        with pytest.raises(SingularPointError) as info:
            F(ComplexPoint.of([(0.5, 0.0)]))
        assert info.value.variables == (1,)

    def test_monomial_products(self, z2):
        both = IndexSet.full(2)
        ordered = ordered_monomial_stem(2, both)(z2)
        conj = conj_monomial_stem(2, both)(z2)
        # conjugating both variables flips the sign of the components with exactly one of them
        assert conj[0].w == pytest.approx(ordered[0].w)
        assert conj[1].w == pytest.approx(-ordered[1].w)
        assert conj[2].w == pytest.approx(-ordered[2].w)
        assert conj[3].w == pytest.approx(ordered[3].w)
        assert const_stem(2, 1.0)(z2)[0] == Quaternion(1.0)

    def test_point_dimension_mismatch(self):
        with pytest.raises(DomainError):
            make_builtin_stem("monomial", 2, 1)(ComplexPoint.of([(0.0, 1.0)]))


class TestStemChecks:
    def test_polynomial_stems_have_parity(self, z2):
        P = QPolynomial(2, [((2, 1), Quaternion(1.0, -1.0, 0.5, 0.0)), ((0, 3), Quaternion(0.0, 0.0, 2.0, 1.0))])
        assert stem_parity_residual(poly_to_stem(P), z2) < 1e-12

    def test_exp_is_holomorphic(self, z2):
        assert stem_cr_residual(make_builtin_stem("exp", 2, 1), 1, z2) < 1e-8

    def test_conjugate_is_not_holomorphic(self, z2):
        assert stem_cr_residual(make_builtin_stem("conj_monomial", 2, 1), 1, z2) == pytest.approx(1.0, abs=1e-8)
