"""
Almansi components S^H_K(f) = (x_K (.) f)'_{s,H}, the 2^n decompositions and their reconstructions.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, List, Tuple, Union

import numpy as np

from .calculus import crf_apply
from .errors import DomainError, ModeError, SingularPointError
from .logging import get_logger
from .poly import (
    QComponentExpr, QPolynomial, RealPolyMap, poly_component_closed_form, poly_slice_function,
    to_real_poly_map,
)
from .quat import ONE, Quaternion
from .slices import QPoint, SliceFunction, slice_eval, sliceness_check
from .stem import (
    ComplexPoint, IndexSet, StemFunction, StemValue, conj_monomial_stem, ordered_monomial_stem,
    popcount, stem_spherical_derivative, stem_tensor,
)
from .validation import validate_index_subset

logger = get_logger(__name__)


class ReconstructionMode(str, Enum):
    SLICE = "slice"
    ORDERED = "ordered"


def _check_sets(n: int, H: IndexSet, K: IndexSet) -> None:
    if H.n != n or K.n != n:
        raise DomainError(f"index sets over {H.n} variables for a function of {n}")
    validate_index_subset(K.members, H.members)


def component_stem(F: StemFunction, H: IndexSet, K: IndexSet) -> StemFunction:
    """G^H_K(F) = (Z_K x F)'_H"""
    _check_sets(F.n, H, K)
    if not H.bits:
        return F
    return stem_spherical_derivative(stem_tensor(ordered_monomial_stem(F.n, K), F), H)


def almansi_component(f: SliceFunction, H: IndexSet, K: IndexSet) -> SliceFunction:
    return SliceFunction(component_stem(f.stem, H, K))


def almansi_component_explicit(F: StemFunction, H: IndexSet, K: IndexSet, z: ComplexPoint,
                               use_closure: bool = False) -> StemValue:
    """Direct component formula:
    G^H_K(F)(z) = sum_{T in H^c} e_T sum_{L in K} alpha_{K minus L} beta_{H minus L}^{-1} F_{(T cup H) minus L}(z)
    """
    _check_sets(F.n, H, K)
    singular = tuple(h for h in H.members if z.betas[h - 1] == 0.0)
    if singular:
        raise SingularPointError(
            f"explicit component needs beta != 0 in {', '.join(f'x{h}' for h in singular)}", variables=singular)
    values = (F.via_closure(z) if use_closure else F(z)).comps
    alphas, betas = z.alphas, z.betas
    out = np.zeros_like(values)
    for T in H.complement().subsets():
        for L in K.subsets():
            weight = 1.0
            for h in (K - L).members:
                weight *= alphas[h - 1]
            for h in (H - L).members:
                weight /= betas[h - 1]
            out[T.bits] += weight * values[(T | H).bits & ~L.bits]
    return StemValue(F.n, out)


@dataclass(frozen=True, eq=False)
class AlmansiDecomposition:
    H: IndexSet
    components: Dict[int, SliceFunction]
    source: SliceFunction
    closed_forms: Dict[int, QComponentExpr] = field(default_factory=dict)

    def component(self, K: IndexSet) -> SliceFunction:
        return self.components[K.bits]

    @property
    def n(self) -> int:
        return self.source.n

    @cached_property
    def slice_terms(self) -> List[Tuple[float, SliceFunction]]:
        """(sign, conj(x)_{H minus K} (.) S^H_K) for every K in H"""
        terms = []
        for K in self.H.subsets():
            rest = self.H - K
            sign = -1.0 if len(rest) % 2 else 1.0
            terms.append((sign, SliceFunction(stem_tensor(conj_monomial_stem(self.n, rest), self.component(K).stem))))
        return terms

    def to_document(self) -> dict:
        comps = {}
        for bits in sorted(self.components):
            if bits in self.closed_forms:
                comps[str(bits)] = self.closed_forms[bits].to_document()
            else:
                comps[str(bits)] = "numeric"
        return {"H": list(self.H.members), "components": comps}


def almansi_decompose(f: SliceFunction, H: IndexSet) -> AlmansiDecomposition:
    if H.n != f.n:
        raise DomainError(f"index set over {H.n} variables for a function of {f.n}")
    components = {K.bits: almansi_component(f, H, K) for K in H.subsets()}
    logger.debug(f"decomposed {f.stem.label or 'function'} over H={H.label()} into {len(components)} components")
    return AlmansiDecomposition(H, components, f)


def almansi_decompose_polynomial(P: QPolynomial, H: IndexSet) -> AlmansiDecomposition:
    """Decomposition of a polynomial, carrying the zonal closed forms next to the iterated components"""
    dec = almansi_decompose(poly_slice_function(P), H)
    closed = {K.bits: poly_component_closed_form(P, H, K) for K in H.subsets()}
    return AlmansiDecomposition(H, dec.components, dec.source, closed)


def _conj_ordered(x: QPoint, members) -> Quaternion:
    out = ONE
    for h in members:
        out = out * x.coords[h - 1].conj()
    return out


def almansi_reconstruct(dec: AlmansiDecomposition, x: QPoint,
                        mode: Union[ReconstructionMode, str] = ReconstructionMode.SLICE) -> Quaternion:
    """sum_{K in H} (-1)^{|H minus K|} conj(x)_{H minus K} (.) S^H_K(f) at x"""
    mode = ReconstructionMode(mode)
    H = dec.H
    total = Quaternion()
    if mode == ReconstructionMode.ORDERED:
        if not H.is_interval():
            raise ModeError(f"ordered reconstruction needs H = {{1..m}}, got {H.label()}")
        for K in H.subsets():
            rest = H - K
            sign = -1.0 if len(rest) % 2 else 1.0
            total = total + (_conj_ordered(x, rest.members) * slice_eval(dec.component(K), x)) * sign
        return total
    for sign, product in dec.slice_terms:
        total = total + slice_eval(product, x) * sign
    return total


def reduced_ordered_reconstruct(dec: AlmansiDecomposition, x: QPoint) -> Quaternion:
    """For f slice in x_h and H = {1..h}:
    sum_{K in {1..h-1}} (-1)^{|K^c|} conj(x)_{K^c} S^h_{K cup h} - conj(x_h) S^h_{1..h-1}
    """
    H, n = dec.H, dec.n
    if not H.bits or not H.is_interval():
        raise ModeError(f"reduced ordered reconstruction needs H = {{1..h}}, got {H.label()}")
    h = len(H)
    last = IndexSet.of(n, [h])
    if not sliceness_check(dec.source.stem, last):
        raise DomainError(f"function is not slice with respect to x{h}")
    head = IndexSet.interval(n, h - 1)
    total = Quaternion()
    for K in head.subsets():
        rest = head - K
        sign = -1.0 if len(rest) % 2 else 1.0
        total = total + (_conj_ordered(x, rest.members) * slice_eval(dec.component(K | last), x)) * sign
    return total - x.coords[h - 1].conj() * slice_eval(dec.component(head), x)


# stem-level identities

def stem_reconstruct(F: StemFunction, H: IndexSet, z: ComplexPoint) -> StemValue:
    """sum_{K in H} (-1)^{|H minus K|} conj(Z)_{H minus K} x G^H_K(F) at z"""
    total = np.zeros((1 << F.n, 4))
    for K in H.subsets():
        rest = H - K
        sign = -1.0 if len(rest) % 2 else 1.0
        total += sign * stem_tensor(conj_monomial_stem(F.n, rest), component_stem(F, H, K))(z).comps
    return StemValue(F.n, total)


def component_recursion_residual(F: StemFunction, H: IndexSet, K: IndexSet, m: int, z: ComplexPoint) -> float:
    """|G^H_K - (G^{H+m}_{K+m} - conj(Z_m) x G^{H+m}_K)| at z, for m outside H"""
    if m in H:
        raise DomainError(f"x{m} already belongs to H={H.label()}")
    single = IndexSet.of(F.n, [m])
    left = component_stem(F, H, K)(z)
    upper = component_stem(F, H | single, K | single)(z)
    lower = stem_tensor(conj_monomial_stem(F.n, single), component_stem(F, H | single, K))(z)
    return left.max_abs_diff(upper - lower)


def recover_stem_block(F: StemFunction, H: IndexSet, K: IndexSet, z: ComplexPoint) -> Tuple[StemValue, StemValue]:
    """Both sides of beta_K^{-1} sum_{T in H^c} e_T F_{K cup T} = sum_{T in H minus K} (-1)^{|T|} alpha_T G^H_{H minus (K cup T)}(F)"""
    _check_sets(F.n, H, K)
    singular = tuple(h for h in K.members if z.betas[h - 1] == 0.0)
    if singular:
        raise SingularPointError("stem recovery needs beta != 0 on K", variables=singular)
    values = F(z).comps
    scale = 1.0
    for h in K.members:
        scale *= z.betas[h - 1]
    lhs = np.zeros_like(values)
    for T in H.complement().subsets():
        lhs[T.bits] = values[K.bits | T.bits] / scale
    rhs = np.zeros_like(values)
    for T in (H - K).subsets():
        weight = -1.0 if popcount(T.bits) % 2 else 1.0
        for h in T.members:
            weight *= z.alphas[h - 1]
        rhs += weight * component_stem(F, H, H - (K | T))(z).comps
    return StemValue(F.n, lhs), StemValue(F.n, rhs)


# CRF characterization

def crf_component_map(f: Union[QPolynomial, SliceFunction], m: int, K: IndexSet) -> RealPolyMap:
    """(-1)^m dbar_m(x_m^{chi_K(m)} ... dbar_1(x_1^{chi_K(1)} f))"""
    M = to_real_poly_map(f)
    n = M.n
    if not 1 <= m <= n:
        raise DomainError(f"m = {m} out of range 1..{n}")
    if K.n != n or not K.issubset(IndexSet.interval(n, m)):
        raise DomainError(f"K={K.label()} must be contained in {{1..{m}}}")
    for j in range(1, m + 1):
        if j in K:
            M = RealPolyMap.variable(n, j) * M
        M = crf_apply(M, j, conjugated=True)
    return M.scale(-1.0 if m % 2 else 1.0)


def crf_component(f: Union[QPolynomial, SliceFunction], m: int, K: IndexSet, x: QPoint) -> Quaternion:
    return crf_component_map(f, m, K).evaluate(x)
