"""
Quaternionic polynomials with right coefficients, zonal polynomials, closed-form Almansi components
and exact expansion to polynomial maps in the 4n real coordinates.
"""

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .closed_form import AxialFactor, ProductStem, ProductTerm
from .errors import CapabilityError, DegreeOverflowError, DomainError
from .logging import get_logger
from .quat import ONE, Quaternion, format_quaternion, qmul_array, split
from .slices import QPoint, SliceFunction
from .stem import ComplexPoint, IndexSet, Provenance, StemFunction
from .validation import validate_index_subset, validate_polynomial_document

logger = get_logger(__name__)

MAX_DEGREE = 32
COEFFICIENT_WARNING = 1e12

Exponents = Tuple[int, ...]


def _ordered_power_product(points: np.ndarray, powers: Sequence[int]) -> np.ndarray:
    """x_1^{p_1} ... x_n^{p_n} at points of shape (N, n, 4)"""
    acc = np.zeros((points.shape[0], 4))
    acc[:, 0] = 1.0
    for j, p in enumerate(powers):
        for _ in range(p):
            acc = qmul_array(acc, points[:, j, :])
    return acc


class QPolynomial:
    """sum_alpha x_1^{alpha_1} ... x_n^{alpha_n} a_alpha"""

    def __init__(self, n: int, terms: Union[Mapping[Exponents, Quaternion], Iterable[Tuple[Exponents, Quaternion]]]):
        if not isinstance(n, int) or not 1 <= n <= 6:
            raise DomainError(f"variable count {n} out of range 1..6")
        self.n = n
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: Dict[Exponents, Quaternion] = {}
        for alpha, coeff in items:
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or any(a < 0 for a in alpha):
                raise DomainError(f"exponent {alpha} invalid for {n} variables")
            merged[alpha] = merged.get(alpha, Quaternion()) + Quaternion.coerce(coeff)
        self.terms: Dict[Exponents, Quaternion] = {
            alpha: c for alpha, c in sorted(merged.items()) if c.norm2() > 0.0
        }

    @classmethod
    def from_document(cls, document) -> "QPolynomial":
        validate_polynomial_document(document)
        return cls(document["n"], [(t["alpha"], Quaternion.from_sequence(t["coeff"])) for t in document["terms"]])

    def to_document(self) -> dict:
        return {"n": self.n, "terms": [{"alpha": list(a), "coeff": c.to_list()} for a, c in self.terms.items()]}

    @classmethod
    def constant(cls, n: int, value) -> "QPolynomial":
        return cls(n, [((0,) * n, Quaternion.coerce(value))])

    @classmethod
    def variable(cls, n: int, h: int, power: int = 1) -> "QPolynomial":
        alpha = [0] * n
        alpha[h - 1] = power
        return cls(n, [(tuple(alpha), ONE)])

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        return QPolynomial(self.n, list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other: "QPolynomial") -> "QPolynomial":
        return QPolynomial(self.n, list(self.terms.items()) + [(a, -c) for a, c in other.terms.items()])

    def __eq__(self, other):
        return isinstance(other, QPolynomial) and self.n == other.n and self.terms == other.terms

    def __repr__(self):
        return f"QPolynomial({self.n}, {self.to_text()!r})"

    def total_degree(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def variables_used(self) -> frozenset:
        return frozenset(j + 1 for a in self.terms for j, p in enumerate(a) if p > 0)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def evaluate(self, x: QPoint) -> Quaternion:
        """Ordered pointwise evaluation x_1^{a_1} ... x_n^{a_n} a"""
        if x.n != self.n:
            raise DomainError(f"point has {x.n} coordinates, polynomial has {self.n} variables")
        total = Quaternion()
        for alpha, coeff in self.terms.items():
            mono = ONE
            for q, p in zip(x.coords, alpha):
                for _ in range(p):
                    mono = mono * q
            total = total + mono * coeff
        return total

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        out = np.zeros((points.shape[0], 4))
        for alpha, coeff in self.terms.items():
            mono = _ordered_power_product(points, alpha)
            out += qmul_array(mono, np.broadcast_to(coeff.to_array(), mono.shape))
        return out

    def to_text(self) -> str:
        parts = []
        for alpha, coeff in self.terms.items():
            factors = [_power_text(f"x{j + 1}", p) for j, p in enumerate(alpha) if p > 0]
            parts.append(_join_with_coefficient(factors, coeff))
        return _join_terms(parts)


def _power_text(name: str, p: int) -> str:
    return name if p == 1 else f"{name}^{p}"


def _join_with_coefficient(factors: List[str], coeff: Quaternion) -> str:
    """Real coefficients lead, quaternion coefficients stay on the right"""
    if coeff.is_real():
        value = coeff.w
        text = f"{value:.12g}"
        if not factors:
            return text
        if value == 1.0:
            return "*".join(factors)
        if value == -1.0:
            return "-" + "*".join(factors)
        return text + "*" + "*".join(factors)
    text = f"({format_quaternion(coeff)})"
    if not factors:
        return text
    return "*".join(factors) + "*" + text


def _join_terms(parts: List[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for part in parts[1:]:
        out += " - " + part[1:] if part.startswith("-") else " + " + part
    return out


# zonal polynomials

def zonal_tilde(k: int, q: Quaternion) -> float:
    """sum_{j=0}^{k} q^j conj(q)^{k-j}, a real number; 0 for k = -1"""
    if k < -1:
        raise DomainError(f"zonal order {k} below -1")
    if k == -1:
        return 0.0
    s = split(q)
    two_alpha = 2.0 * s.alpha
    norm2 = s.alpha * s.alpha + s.beta * s.beta
    prev, current = 0.0, 1.0
    for _ in range(k):
        prev, current = current, two_alpha * current - norm2 * prev
    return current


def zonal_tilde_array(k: int, alpha: np.ndarray, beta2: np.ndarray) -> np.ndarray:
    """Recurrence on arrays of real parts and squared imaginary norms"""
    if k == -1:
        return np.zeros_like(alpha)
    norm2 = alpha * alpha + beta2
    prev, current = np.zeros_like(alpha), np.ones_like(alpha)
    for _ in range(k):
        prev, current = current, 2.0 * alpha * current - norm2 * prev
    return current


def zonal_tilde_poly(k: int) -> Dict[Tuple[int, int], float]:
    """Coefficients of the zonal polynomial in (alpha, beta), only even powers of beta"""
    if k < -1:
        raise DomainError(f"zonal order {k} below -1")
    if k == -1:
        return {}
    prev: Dict[Tuple[int, int], float] = {}
    current: Dict[Tuple[int, int], float] = {(0, 0): 1.0}
    for _ in range(k):
        nxt: Dict[Tuple[int, int], float] = {}
        for (p, q), c in current.items():
            nxt[(p + 1, q)] = nxt.get((p + 1, q), 0.0) + 2.0 * c
        for (p, q), c in prev.items():
            nxt[(p + 2, q)] = nxt.get((p + 2, q), 0.0) - c
            nxt[(p, q + 2)] = nxt.get((p, q + 2), 0.0) - c
        prev, current = current, {e: c for e, c in nxt.items() if c != 0.0}
    return current


# closed-form components

@dataclass(frozen=True)
class ComponentTerm:
    zonal_orders: Tuple[Optional[int], ...]
    powers: Tuple[int, ...]
    coeff: Quaternion


class QComponentExpr:
    """prod_{j in H} Zt_{k_j}(x_j) prod_{i not in H} x_i^{alpha_i} a, summed over terms"""

    def __init__(self, n: int, H: IndexSet, K: IndexSet, terms: Iterable[ComponentTerm]):
        self.n = n
        self.H = H
        self.K = K
        self.terms: List[ComponentTerm] = [
            t for t in terms if not any(k == -1 for k in t.zonal_orders if k is not None)
        ]

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, x: QPoint) -> Quaternion:
        total = Quaternion()
        for t in self.terms:
            scalar = 1.0
            mono = ONE
            for q, k, p in zip(x.coords, t.zonal_orders, t.powers):
                if k is not None:
                    scalar *= zonal_tilde(k, q)
                for _ in range(p):
                    mono = mono * q
            total = total + (mono * t.coeff) * scalar
        return total

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        out = np.zeros((points.shape[0], 4))
        alpha = points[:, :, 0]
        beta2 = np.sum(points[:, :, 1:] ** 2, axis=-1)
        for t in self.terms:
            scalar = np.ones(points.shape[0])
            for j, k in enumerate(t.zonal_orders):
                if k is not None:
                    scalar = scalar * zonal_tilde_array(k, alpha[:, j], beta2[:, j])
            mono = _ordered_power_product(points, t.powers)
            out += qmul_array(mono, np.broadcast_to(t.coeff.to_array(), mono.shape)) * scalar[:, None]
        return out

    def to_product_stem(self) -> ProductStem:
        terms = []
        for t in self.terms:
            factors = tuple(
                AxialFactor.zonal(k) if k is not None else AxialFactor.power(p)
                for k, p in zip(t.zonal_orders, t.powers)
            )
            terms.append(ProductTerm(factors, t.coeff))
        return ProductStem(self.n, terms)

    def to_slice_function(self) -> SliceFunction:
        return SliceFunction(product_stem_function(self.to_product_stem(), Provenance.POLYNOMIAL,
                                                   label=self.display()))

    def display(self) -> str:
        """Product form, zonal factors written Zt{k}(x{j}); order-0 zonals are omitted"""
        parts = []
        for t in self.terms:
            factors = []
            for j, (k, p) in enumerate(zip(t.zonal_orders, t.powers), start=1):
                if k is not None and k > 0:
                    factors.append(f"Zt{k}(x{j})")
                elif k is None and p > 0:
                    factors.append(_power_text(f"x{j}", p))
            parts.append(_join_with_coefficient(factors, t.coeff))
        return _join_terms(parts)

    def expanded(self) -> str:
        """Zonal factors expanded in a{j} = Re(x_j) and b{j} = |Im(x_j)|"""
        collected: Dict[tuple, np.ndarray] = {}
        for t in self.terms:
            per_variable = []
            for j, k in enumerate(t.zonal_orders):
                per_variable.append(list(zonal_tilde_poly(k).items()) if k is not None else [((0, 0), 1.0)])
            for combo in cartesian(*per_variable):
                a_exp = tuple(pq[0] for pq, _ in combo)
                b_exp = tuple(pq[1] for pq, _ in combo)
                scalar = float(np.prod([c for _, c in combo]))
                key = (a_exp, b_exp, t.powers)
                collected[key] = collected.get(key, np.zeros(4)) + scalar * t.coeff.to_array()
        parts = []
        for (a_exp, b_exp, powers), coeff in sorted(collected.items(), key=lambda item: item[0], reverse=True):
            if not np.any(np.abs(coeff) > 1e-14):
                continue
            factors = []
            for j in range(self.n):
                if a_exp[j]:
                    factors.append(_power_text(f"a{j + 1}", a_exp[j]))
                if b_exp[j]:
                    factors.append(_power_text(f"b{j + 1}", b_exp[j]))
            for j in range(self.n):
                if powers[j]:
                    factors.append(_power_text(f"x{j + 1}", powers[j]))
            parts.append(_join_with_coefficient(factors, Quaternion(*coeff)))
        return _join_terms(parts)

    def to_document(self) -> dict:
        return {
            "H": list(self.H.members),
            "K": list(self.K.members),
            "closed_form": self.display(),
            "expanded": self.expanded(),
        }


def poly_component_closed_form(P: QPolynomial, H: IndexSet, K: IndexSet) -> QComponentExpr:
    """S^H_K(P) termwise: zonal factors of order alpha_j - 1 + chi_K(j) for j in H"""
    if H.n != P.n or K.n != P.n:
        raise DomainError(f"index sets over {H.n} variables for a polynomial in {P.n}")
    validate_index_subset(K.members, H.members)
    terms = []
    for alpha, coeff in P.terms.items():
        orders = tuple(
            alpha[j] - 1 + (1 if (j + 1) in K else 0) if (j + 1) in H else None for j in range(P.n)
        )
        powers = tuple(0 if (j + 1) in H else alpha[j] for j in range(P.n))
        terms.append(ComponentTerm(orders, powers, coeff))
    return QComponentExpr(P.n, H, K, terms)


# stems

def product_stem_function(closed: ProductStem, provenance: Provenance = Provenance.DERIVED,
                          label: str = "") -> StemFunction:
    """Stem backed only by a closed form; the closure is the closed-form evaluation itself"""

    def evaluate(z: ComplexPoint) -> np.ndarray:
        return closed.evaluate(z.alphas, z.betas)

    return StemFunction(closed.n, evaluate, IndexSet.empty(closed.n), provenance, closed, label=label)


def poly_product_stem(P: QPolynomial) -> ProductStem:
    return ProductStem(P.n, [
        ProductTerm(tuple(AxialFactor.power(p) for p in alpha), coeff) for alpha, coeff in P.terms.items()
    ])


def poly_to_stem(P: QPolynomial) -> StemFunction:
    """F_K = sum over terms of prod_{j in K} Im(z_j^{a_j}) prod_{j not in K} Re(z_j^{a_j}) a"""
    n = P.n
    terms = [(alpha, coeff.to_array()) for alpha, coeff in P.terms.items()]

    def evaluate(z: ComplexPoint) -> np.ndarray:
        out = np.zeros((1 << n, 4))
        for alpha, coeff in terms:
            weights = np.ones(1)
            for (a, b), p in zip(z.coords, alpha):
                w = complex(a, b) ** p
                weights = np.concatenate([weights * w.real, weights * w.imag])
            out += np.outer(weights, coeff)
        return out

    return StemFunction(n, evaluate, IndexSet.empty(n), Provenance.POLYNOMIAL, poly_product_stem(P),
                        label=P.to_text())


def poly_slice_function(P: QPolynomial) -> SliceFunction:
    return SliceFunction(poly_to_stem(P))


def poly_slice_product(P: QPolynomial, Q: QPolynomial) -> QPolynomial:
    """(x^a p) (.) (x^c q) = x^{a+c} (p q)"""
    if P.n != Q.n:
        raise DomainError(f"slice product of polynomials in {P.n} and {Q.n} variables")
    return QPolynomial(P.n, [
        (tuple(x + y for x, y in zip(a, c)), p * q)
        for a, p in P.terms.items() for c, q in Q.terms.items()
    ])


# real-coordinate expansion

class RealPolyMap:
    """Quaternion-valued polynomial in (alpha_h, beta_h, gamma_h, delta_h), h = 1..n"""

    def __init__(self, n: int, coeffs: Optional[Mapping[Exponents, np.ndarray]] = None):
        self.n = n
        self.coeffs: Dict[Exponents, np.ndarray] = {}
        for exp, c in (coeffs or {}).items():
            c = np.asarray(c, dtype=float)
            if np.any(c != 0.0):
                self.coeffs[tuple(exp)] = c

    @classmethod
    def zero(cls, n: int) -> "RealPolyMap":
        return cls(n)

    @classmethod
    def constant(cls, n: int, value) -> "RealPolyMap":
        return cls(n, {(0,) * (4 * n): Quaternion.coerce(value).to_array()})

    @classmethod
    def coordinate(cls, n: int, h: int, c: int, unit: Quaternion = ONE) -> "RealPolyMap":
        """unit * (c-th real coordinate of x_h), c = 0..3"""
        exp = [0] * (4 * n)
        exp[4 * (h - 1) + c] = 1
        return cls(n, {tuple(exp): unit.to_array()})

    @classmethod
    def variable(cls, n: int, h: int) -> "RealPolyMap":
        return (cls.coordinate(n, h, 0) + cls.coordinate(n, h, 1, Quaternion(0, 1, 0, 0))
                + cls.coordinate(n, h, 2, Quaternion(0, 0, 1, 0)) + cls.coordinate(n, h, 3, Quaternion(0, 0, 0, 1)))

    @classmethod
    def imaginary(cls, n: int, h: int) -> "RealPolyMap":
        return (cls.coordinate(n, h, 1, Quaternion(0, 1, 0, 0)) + cls.coordinate(n, h, 2, Quaternion(0, 0, 1, 0))
                + cls.coordinate(n, h, 3, Quaternion(0, 0, 0, 1)))

    def _combine(self, other: "RealPolyMap", sign: float) -> "RealPolyMap":
        if other.n != self.n:
            raise DomainError(f"maps over {self.n} and {other.n} variables")
        out = {e: c.copy() for e, c in self.coeffs.items()}
        for e, c in other.coeffs.items():
            out[e] = out[e] + sign * c if e in out else sign * c
        return RealPolyMap(self.n, out)

    def __add__(self, other: "RealPolyMap") -> "RealPolyMap":
        return self._combine(other, 1.0)

    def __sub__(self, other: "RealPolyMap") -> "RealPolyMap":
        return self._combine(other, -1.0)

    def __neg__(self) -> "RealPolyMap":
        return RealPolyMap(self.n, {e: -c for e, c in self.coeffs.items()})

    def scale(self, value: float) -> "RealPolyMap":
        return RealPolyMap(self.n, {e: value * c for e, c in self.coeffs.items()})

    def __mul__(self, other: "RealPolyMap") -> "RealPolyMap":
        """Pointwise product with the quaternion order kept: self on the left"""
        if other.n != self.n:
            raise DomainError(f"maps over {self.n} and {other.n} variables")
        if self.degree() + other.degree() > MAX_DEGREE:
            raise DegreeOverflowError(f"real expansion would exceed total degree {MAX_DEGREE}")
        out: Dict[Exponents, np.ndarray] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = qmul_array(c1, c2)
                out[e] = out[e] + prod if e in out else prod
        return RealPolyMap(self.n, out)

    def left_mul(self, q: Quaternion) -> "RealPolyMap":
        row = q.to_array()
        return RealPolyMap(self.n, {e: qmul_array(row, c) for e, c in self.coeffs.items()})

    def right_mul(self, q: Quaternion) -> "RealPolyMap":
        row = q.to_array()
        return RealPolyMap(self.n, {e: qmul_array(c, row) for e, c in self.coeffs.items()})

    def diff(self, var: int) -> "RealPolyMap":
        """Partial derivative in the real coordinate with flat index var"""
        out: Dict[Exponents, np.ndarray] = {}
        for e, c in self.coeffs.items():
            if e[var] == 0:
                continue
            lowered = list(e)
            lowered[var] -= 1
            out[tuple(lowered)] = e[var] * c
        return RealPolyMap(self.n, out)

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def max_coeff(self) -> float:
        return max((float(np.max(np.abs(c))) for c in self.coeffs.values()), default=0.0)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_coeff() <= tol

    def variables_used(self) -> frozenset:
        return frozenset(i // 4 + 1 for e in self.coeffs for i, p in enumerate(e) if p > 0)

    def evaluate(self, x: QPoint) -> Quaternion:
        coords = x.to_array().ravel()
        total = np.zeros(4)
        for e, c in self.coeffs.items():
            total += float(np.prod(coords ** np.array(e))) * c
        return Quaternion(*total)

    def check_coefficients(self) -> "RealPolyMap":
        if self.degree() > MAX_DEGREE:
            raise DegreeOverflowError(f"real expansion of total degree {self.degree()} exceeds {MAX_DEGREE}")
        largest = self.max_coeff()
        if largest > COEFFICIENT_WARNING:
            logger.warning(f"real expansion has a coefficient of magnitude {largest:.3g}")
        return self


def _axial_map(n: int, h: int, factor: AxialFactor, cache: Dict[tuple, RealPolyMap]) -> RealPolyMap:
    """u(alpha_h, |Im x_h|) + Im(x_h) * (v/beta)(alpha_h, |Im x_h|) with beta^2 -> beta^2 + gamma^2 + delta^2"""

    def power_of(name: str, k: int) -> RealPolyMap:
        key = (name, h, k)
        if key not in cache:
            if k == 0:
                cache[key] = RealPolyMap.constant(n, 1.0)
            elif name == "alpha":
                cache[key] = power_of(name, k - 1) * RealPolyMap.coordinate(n, h, 0)
            else:
                radius2 = (RealPolyMap.coordinate(n, h, 1) * RealPolyMap.coordinate(n, h, 1)
                           + RealPolyMap.coordinate(n, h, 2) * RealPolyMap.coordinate(n, h, 2)
                           + RealPolyMap.coordinate(n, h, 3) * RealPolyMap.coordinate(n, h, 3))
                cache[key] = power_of(name, k - 1) * radius2
        return cache[key]

    def even_part(coeffs: Dict[Tuple[int, int], float]) -> RealPolyMap:
        out = RealPolyMap.zero(n)
        for (p, q), c in coeffs.items():
            if q % 2:
                raise CapabilityError("factor violates the stem parity")
            out = out + (power_of("alpha", p) * power_of("radius2", q // 2)).scale(c)
        return out

    result = even_part(factor.real_poly_coeffs())
    odd = factor.imag_over_beta()
    if not odd.is_zero():
        result = result + RealPolyMap.imaginary(n, h) * even_part(odd.real_poly_coeffs())
    return result


def product_stem_to_map(closed: ProductStem) -> RealPolyMap:
    """Slice function of a product-form stem: ordered product of axial factors, coefficient on the right"""
    n = closed.n
    if closed.degree() > MAX_DEGREE:
        raise DegreeOverflowError(f"stem of total degree {closed.degree()} exceeds {MAX_DEGREE}")
    cache: Dict[tuple, RealPolyMap] = {}
    total = RealPolyMap.zero(n)
    for t in closed.terms:
        acc = RealPolyMap.constant(n, 1.0)
        for h, factor in enumerate(t.factors, start=1):
            if factor.is_one():
                continue
            acc = acc * _axial_map(n, h, factor, cache)
        total = total + acc.right_mul(t.coeff)
    return total.check_coefficients()


def to_real_poly_map(source) -> RealPolyMap:
    """Exact expansion of a polynomial, a closed-form component or an exact stem"""
    if isinstance(source, QPolynomial):
        return product_stem_to_map(poly_product_stem(source))
    if isinstance(source, QComponentExpr):
        return product_stem_to_map(source.to_product_stem())
    if isinstance(source, ProductStem):
        return product_stem_to_map(source)
    if isinstance(source, SliceFunction):
        source = source.stem
    if isinstance(source, StemFunction):
        if source.closed_form is None:
            raise CapabilityError(f"stem {source.label or '<closure>'} has no closed form to expand")
        return product_stem_to_map(source.closed_form)
    raise CapabilityError(f"cannot expand {type(source).__name__} into a real polynomial map")
