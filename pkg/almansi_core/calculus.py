"""
Cauchy-Riemann-Fueter operators and Laplacians.

The exact path differentiates RealPolyMap coefficient tables; the finite-difference path works on any
slice function through its values. Operators carry the factor 1/2:

    dbar_h = (d/dalpha_h + i d/dbeta_h + j d/dgamma_h + k d/ddelta_h) / 2
    d_h    = (d/dalpha_h - i d/dbeta_h - j d/dgamma_h - k d/ddelta_h) / 2

so that 4 d_h dbar_h = Delta_h.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

from .differences import default_step, derivative, second_derivative
from .errors import CapabilityError, DomainError
from .logging import get_logger
from .poly import QPolynomial, RealPolyMap, poly_component_closed_form, poly_product_stem, to_real_poly_map
from .quat import Quaternion, I, J, K as K_UNIT
from .slices import QPoint, SliceFunction, slice_eval
from .stem import IndexSet
from .validation import validate_variable_index

logger = get_logger(__name__)

UNITS = (I, J, K_UNIT)


class DiffPath(str, Enum):
    EXACT = "exact"
    FINITE_DIFFERENCE = "finite-difference"


class DiffOperator(str, Enum):
    CRF = "crf"
    CRF_CONJ = "crf-conj"
    LAPLACIAN = "laplacian"


@dataclass(frozen=True)
class DiffOpResult:
    """Operator output: a map on the exact path, a value at one point on the finite-difference path"""
    path: DiffPath
    map: Optional[RealPolyMap] = None
    value: Optional[Quaternion] = None

    def at(self, x: QPoint) -> Quaternion:
        if self.map is not None:
            return self.map.evaluate(x)
        return self.value


def _flat(h: int, c: int) -> int:
    return 4 * (h - 1) + c


def crf_apply(M: RealPolyMap, h: int, conjugated: bool) -> RealPolyMap:
    """dbar_h M when conjugated, d_h M otherwise; units multiply on the left"""
    validate_variable_index(h, M.n)
    sign = 1.0 if conjugated else -1.0
    out = M.diff(_flat(h, 0))
    for c, unit in enumerate(UNITS, start=1):
        out = out + M.diff(_flat(h, c)).left_mul(unit).scale(sign)
    return out.scale(0.5)


def laplacian(M: RealPolyMap, h: int) -> RealPolyMap:
    validate_variable_index(h, M.n)
    out = RealPolyMap.zero(M.n)
    for c in range(4):
        var = _flat(h, c)
        out = out + M.diff(var).diff(var)
    return out


def apply_operator(M: RealPolyMap, h: int, operator: Union[DiffOperator, str]) -> RealPolyMap:
    operator = DiffOperator(operator)
    if operator == DiffOperator.LAPLACIAN:
        return laplacian(M, h)
    return crf_apply(M, h, conjugated=operator == DiffOperator.CRF_CONJ)


def fd_directional(f: SliceFunction, h: int, x: QPoint, operator: Union[DiffOperator, str],
                   step: Optional[float] = None) -> Quaternion:
    """Finite-difference version of the operators at x; error O(step^4) before extrapolation"""
    operator = DiffOperator(operator)
    validate_variable_index(h, f.n)
    base = x.to_array()

    def along(c: int):
        def value(t: float):
            moved = base.copy()
            moved[h - 1, c] = t
            return slice_eval(f, QPoint.from_array(moved)).to_array()
        return value

    def step_for(c: int) -> float:
        return step if step is not None else default_step(base[h - 1, c])

    if operator == DiffOperator.LAPLACIAN:
        total = sum(second_derivative(along(c), base[h - 1, c], step_for(c)) for c in range(4))
        return Quaternion(*total)
    sign = 1.0 if operator == DiffOperator.CRF_CONJ else -1.0
    result = Quaternion(*derivative(along(0), base[h - 1, 0], step_for(0)))
    for c, unit in enumerate(UNITS, start=1):
        result = result + unit * Quaternion(*derivative(along(c), base[h - 1, c], step_for(c))) * sign
    return result * 0.5


def differentiate(f: Union[QPolynomial, SliceFunction], h: int, operator: Union[DiffOperator, str],
                  x: Optional[QPoint] = None, step: Optional[float] = None) -> DiffOpResult:
    """Exact operator when f expands to a polynomial map, finite differences at x otherwise"""
    try:
        return DiffOpResult(DiffPath.EXACT, map=apply_operator(to_real_poly_map(f), h, operator))
    except CapabilityError:
        if x is None or not isinstance(f, SliceFunction):
            raise
    logger.debug(f"no exact expansion for {f.stem.label or 'function'}, using finite differences")
    return DiffOpResult(DiffPath.FINITE_DIFFERENCE, value=fd_directional(f, h, x, operator, step))


def conj_variable_map(n: int, h: int) -> RealPolyMap:
    return RealPolyMap.coordinate(n, h, 0) - RealPolyMap.imaginary(n, h)


def _component_map(P: QPolynomial, H: IndexSet, K: IndexSet) -> RealPolyMap:
    return to_real_poly_map(poly_component_closed_form(P, H, K))


# identities on polynomials

def spherical_derivative_map(P: QPolynomial, h: int) -> RealPolyMap:
    validate_variable_index(h, P.n)
    return to_real_poly_map(poly_product_stem(P).spherical_derivative([h]))


def _require_later_variables(P: QPolynomial, m: int, what: str) -> None:
    """P slice in x_m, checked as 'only variables >= m'"""
    validate_variable_index(m, P.n)
    lower = sorted(h for h in P.variables_used() if h < m)
    if lower:
        raise DomainError(
            f"{what} in x{m} needs a polynomial in x{m}..x{P.n} only, "
            f"got a dependence on {', '.join(f'x{h}' for h in lower)}")


def crf_derivative_residual(P: QPolynomial, h: int) -> float:
    """max |dbar_h P + P'_{s,h}| over the coefficients; P must not depend on x_1..x_{h-1}"""
    _require_later_variables(P, h, "CRF derivative check")
    M = to_real_poly_map(P)
    return (crf_apply(M, h, conjugated=True) + spherical_derivative_map(P, h)).max_coeff()


def factorization_residual(M: RealPolyMap, h: int) -> float:
    """max |Delta_h M - 4 d_h dbar_h M|"""
    composed = crf_apply(crf_apply(M, h, conjugated=True), h, conjugated=False).scale(4.0)
    return (laplacian(M, h) - composed).max_coeff()


def biharmonic_residual(P: QPolynomial, m: int) -> float:
    M = to_real_poly_map(P)
    return laplacian(laplacian(M, m), m).max_coeff()


def fueter_residual(P: QPolynomial, m: int) -> float:
    """max coefficient of dbar_m Delta_m P"""
    _require_later_variables(P, m, "Fueter check")
    M = to_real_poly_map(P)
    return crf_apply(laplacian(M, m), m, conjugated=True).max_coeff()


def laplacian_sum_formula(P: QPolynomial, m: int) -> Tuple[RealPolyMap, RealPolyMap]:
    """Delta_m P and -4 sum_{K in {1..m-1}} (-1)^{|K^c|} conj(x)_{K^c} d_m S^m_K(P)"""
    validate_variable_index(m, P.n)
    n = P.n
    lhs = laplacian(to_real_poly_map(P), m)
    H = IndexSet.interval(n, m)
    head = IndexSet.interval(n, m - 1)
    rhs = RealPolyMap.zero(n)
    for K in head.subsets():
        rest = head - K
        term = crf_apply(_component_map(P, H, K), m, conjugated=False)
        for h in reversed(rest.members):
            term = conj_variable_map(n, h) * term
        rhs = rhs + (term if len(rest) % 2 == 0 else -term)
    return lhs, rhs.scale(-4.0)


def laplacian_sum_residual(P: QPolynomial, m: int) -> float:
    lhs, rhs = laplacian_sum_formula(P, m)
    return (lhs - rhs).max_coeff()


def component_harmonicity_residual(P: QPolynomial, H: IndexSet, K: IndexSet) -> float:
    """max over h in H of the coefficients of Delta_h S^H_K(P)"""
    M = _component_map(P, H, K)
    return max((laplacian(M, h).max_coeff() for h in H.members), default=0.0)


def axially_monogenic_residual(P: QPolynomial, m: int, K: IndexSet) -> float:
    """dbar_m d_m S^m_K(P) and, below the last variable, dbar_{m+1} Delta_{m+1} S^m_K(P)"""
    validate_variable_index(m, P.n)
    M = _component_map(P, IndexSet.interval(P.n, m), K)
    residual = crf_apply(crf_apply(M, m, conjugated=False), m, conjugated=True).max_coeff()
    if m < P.n:
        residual = max(residual, crf_apply(laplacian(M, m + 1), m + 1, conjugated=True).max_coeff())
    return residual
