"""
Exact product-form stems.

A stem that is a sum of terms g_1(z_1) x ... x g_n(z_n) * c, where each g_j is a complex polynomial
in (alpha_j, beta_j) with the stem parity (real part even in beta_j, imaginary part odd) and c is
a right quaternion coefficient, stays in this form under the tensor product, spherical values and
spherical derivatives. Polynomial stems, conjugate monomials and every Almansi component built
from them therefore have closed forms that can be evaluated anywhere, including beta_h = 0.

The tensor product of such terms multiplies the per-variable factors as complex numbers: the
(-1)^{|K cap H|} e_{K delta H} rule is exactly the product in C x ... x C with e_h playing the role
of the imaginary unit of the h-th copy.
"""

from itertools import product as cartesian
from math import comb
from typing import Dict, Iterable, List, Mapping, NamedTuple, Sequence, Tuple

import numpy as np

from .errors import CapabilityError, DomainError
from .logging import get_logger
from .quat import ONE, Quaternion, qmul_array

logger = get_logger(__name__)

Exponent = Tuple[int, int]


class AxialFactor:
    """g(alpha, beta) = sum c_pq alpha^p beta^q with complex c_pq"""

    __slots__ = ("coeffs", "_key")

    def __init__(self, coeffs: Mapping[Exponent, complex]):
        cleaned = {}
        for exp, c in coeffs.items():
            c = complex(c)
            if c != 0:
                cleaned[exp] = c
        self.coeffs: Dict[Exponent, complex] = cleaned
        self._key = tuple(sorted(cleaned.items(), key=lambda item: item[0]))

    @classmethod
    def one(cls) -> "AxialFactor":
        return cls({(0, 0): 1.0})

    @classmethod
    def zero(cls) -> "AxialFactor":
        return cls({})

    @classmethod
    def monomial(cls) -> "AxialFactor":
        """z = alpha + i*beta"""
        return cls({(1, 0): 1.0, (0, 1): 1j})

    @classmethod
    def conj_monomial(cls) -> "AxialFactor":
        return cls({(1, 0): 1.0, (0, 1): -1j})

    @classmethod
    def imaginary(cls) -> "AxialFactor":
        """i*beta, the stem of Im(x_h)"""
        return cls({(0, 1): 1j})

    @classmethod
    def power(cls, k: int) -> "AxialFactor":
        """(alpha + i*beta)^k by the binomial identity"""
        if k < 0:
            raise DomainError(f"negative power {k}")
        return cls({(k - j, j): comb(k, j) * (1j ** j) for j in range(k + 1)})

    @classmethod
    def zonal(cls, k: int) -> "AxialFactor":
        """Real factor Im(z^{k+1}) / beta, the stem of the zonal polynomial of order k"""
        if k < -1:
            raise DomainError(f"zonal order {k} below -1")
        return cls.power(k + 1).imag_over_beta()

    @classmethod
    def real_poly(cls, coeffs: Mapping[Exponent, float]) -> "AxialFactor":
        return cls({exp: complex(c, 0.0) for exp, c in coeffs.items()})

    def __mul__(self, other: "AxialFactor") -> "AxialFactor":
        out: Dict[Exponent, complex] = {}
        for (p1, q1), c1 in self.coeffs.items():
            for (p2, q2), c2 in other.coeffs.items():
                key = (p1 + p2, q1 + q2)
                out[key] = out.get(key, 0j) + c1 * c2
        return AxialFactor(out)

    def __eq__(self, other):
        return isinstance(other, AxialFactor) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"AxialFactor({dict(self._key)!r})"

    @property
    def key(self):
        return self._key

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self._key == (((0, 0), 1 + 0j),)

    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self.coeffs.values())

    def degree(self) -> int:
        return max((p + q for p, q in self.coeffs), default=0)

    def real_part(self) -> "AxialFactor":
        return AxialFactor({exp: c.real for exp, c in self.coeffs.items()})

    def imag_over_beta(self) -> "AxialFactor":
        """Im(g)/beta as a real factor; exact because Im(g) is odd in beta"""
        out = {}
        for (p, q), c in self.coeffs.items():
            if c.imag == 0:
                continue
            if q == 0:
                raise CapabilityError("factor violates the stem parity: imaginary part not divisible by beta")
            out[(p, q - 1)] = c.imag
        return AxialFactor(out)

    def real_poly_coeffs(self) -> Dict[Exponent, float]:
        return {exp: c.real for exp, c in self.coeffs.items() if c.real != 0}

    def imag_poly_coeffs(self) -> Dict[Exponent, float]:
        return {exp: c.imag for exp, c in self.coeffs.items() if c.imag != 0}

    def evaluate(self, alpha, beta):
        """(u, v) = (Re g, Im g) at scalars or numpy arrays"""
        u = 0.0 * alpha
        v = 0.0 * alpha
        for (p, q), c in self.coeffs.items():
            mono = alpha ** p * beta ** q
            if c.real:
                u = u + c.real * mono
            if c.imag:
                v = v + c.imag * mono
        return u, v


class ProductTerm(NamedTuple):
    factors: Tuple[AxialFactor, ...]
    coeff: Quaternion


class ProductStem:
    """Finite sum of product terms in n variables"""

    def __init__(self, n: int, terms: Iterable[ProductTerm]):
        self.n = n
        merged: Dict[tuple, Tuple[Tuple[AxialFactor, ...], np.ndarray]] = {}
        for term in terms:
            if len(term.factors) != n:
                raise DomainError(f"product term has {len(term.factors)} factors, expected {n}")
            if any(f.is_zero() for f in term.factors):
                continue
            key = tuple(f.key for f in term.factors)
            coeff = np.array(list(term.coeff), dtype=float)
            if key in merged:
                merged[key] = (merged[key][0], merged[key][1] + coeff)
            else:
                merged[key] = (term.factors, coeff)
        self.terms: List[ProductTerm] = [
            ProductTerm(factors, Quaternion(*coeff))
            for factors, coeff in merged.values() if np.any(coeff != 0.0)
        ]

    # constructors
    @classmethod
    def constant(cls, n: int, value: Quaternion) -> "ProductStem":
        return cls(n, [ProductTerm(tuple(AxialFactor.one() for _ in range(n)), value)])

    @classmethod
    def single(cls, n: int, h: int, factor: AxialFactor, coeff: Quaternion = ONE) -> "ProductStem":
        factors = [AxialFactor.one() for _ in range(n)]
        factors[h - 1] = factor
        return cls(n, [ProductTerm(tuple(factors), coeff)])

    # algebra
    def tensor(self, other: "ProductStem") -> "ProductStem":
        if other.n != self.n:
            raise DomainError(f"tensor of stems in {self.n} and {other.n} variables")
        terms = []
        for a in self.terms:
            for b in other.terms:
                factors = tuple(fa * fb for fa, fb in zip(a.factors, b.factors))
                terms.append(ProductTerm(factors, a.coeff * b.coeff))
        return ProductStem(self.n, terms)

    def __add__(self, other: "ProductStem") -> "ProductStem":
        if other.n != self.n:
            raise DomainError(f"sum of stems in {self.n} and {other.n} variables")
        return ProductStem(self.n, list(self.terms) + list(other.terms))

    def scale_right(self, c: Quaternion) -> "ProductStem":
        return ProductStem(self.n, [ProductTerm(t.factors, t.coeff * c) for t in self.terms])

    def _map_factors(self, members: Sequence[int], op) -> "ProductStem":
        terms = []
        for t in self.terms:
            factors = list(t.factors)
            for h in members:
                factors[h - 1] = op(factors[h - 1])
            terms.append(ProductTerm(tuple(factors), t.coeff))
        return ProductStem(self.n, terms)

    def spherical_value(self, members: Sequence[int]) -> "ProductStem":
        return self._map_factors(members, AxialFactor.real_part)

    def spherical_derivative(self, members: Sequence[int]) -> "ProductStem":
        return self._map_factors(members, AxialFactor.imag_over_beta)

    # evaluation
    def evaluate(self, alphas: Sequence[float], betas: Sequence[float]) -> np.ndarray:
        """Dense component array of shape (2^n, 4), row index = bitmask of K"""
        out = np.zeros((1 << self.n, 4))
        for t in self.terms:
            weights = np.ones(1)
            for j, factor in enumerate(t.factors):
                u, v = factor.evaluate(alphas[j], betas[j])
                weights = np.concatenate([weights * u, weights * v])
            out += np.outer(weights, np.array(list(t.coeff)))
        return out

    def evaluate_slice_batch(self, points: np.ndarray) -> np.ndarray:
        """Induced slice function at points of shape (N, n, 4), computed as the ordered product
        of u_j + Im(x_j) * v_j / beta_j, right-multiplied by the coefficient"""
        npts = points.shape[0]
        out = np.zeros((npts, 4))
        alphas = points[:, :, 0]
        imags = points.copy()
        imags[:, :, 0] = 0.0
        betas = np.linalg.norm(points[:, :, 1:], axis=-1)
        for t in self.terms:
            acc = np.zeros((npts, 4))
            acc[:, 0] = 1.0
            for j, factor in enumerate(t.factors):
                if factor.is_one():
                    continue
                u, _ = factor.real_part().evaluate(alphas[:, j], betas[:, j])
                w = factor.imag_over_beta()
                left = imags[:, j, :] * (w.evaluate(alphas[:, j], betas[:, j])[0])[:, None]
                left[:, 0] += u
                acc = qmul_array(acc, left)
            out += qmul_array(acc, np.broadcast_to(np.array(list(t.coeff)), (npts, 4)))
        return out

    # exact structure
    def component_polynomials(self) -> Dict[int, Dict[Tuple[int, ...], np.ndarray]]:
        """F_K as polynomials in (alpha_1, beta_1, ..., alpha_n, beta_n) with quaternion coefficients"""
        comps: Dict[int, Dict[Tuple[int, ...], np.ndarray]] = {}
        for t in self.terms:
            parts = [(f.real_poly_coeffs(), f.imag_poly_coeffs()) for f in t.factors]
            coeff = np.array(list(t.coeff))
            for bits in range(1 << self.n):
                chosen = [parts[j][1] if bits >> j & 1 else parts[j][0] for j in range(self.n)]
                if any(not c for c in chosen):
                    continue
                target = comps.setdefault(bits, {})
                for combo in cartesian(*(list(c.items()) for c in chosen)):
                    exp = tuple(e for (pq, _) in combo for e in pq)
                    scalar = float(np.prod([c for (_, c) in combo]))
                    target[exp] = target.get(exp, np.zeros(4)) + scalar * coeff
        return comps

    def support(self, tol: float = 1e-12) -> frozenset:
        """Bitmasks K whose component F_K is not the zero polynomial"""
        comps = self.component_polynomials()
        scale = max((np.max(np.abs(c)) for poly in comps.values() for c in poly.values()), default=0.0)
        threshold = tol * max(1.0, scale)
        return frozenset(
            bits for bits, poly in comps.items()
            if any(np.max(np.abs(c)) > threshold for c in poly.values())
        )

    def is_zero(self, tol: float = 1e-12) -> bool:
        return not self.support(tol)

    def degree(self) -> int:
        return max((sum(f.degree() for f in t.factors) for t in self.terms), default=0)

    def variables_used(self) -> frozenset:
        return frozenset(
            j + 1 for t in self.terms for j, f in enumerate(t.factors) if not f.is_one()
        )

    def is_real_valued(self) -> bool:
        return all(t.coeff.is_real() for t in self.terms)


def conj_ordered_product(n: int, members: Sequence[int]) -> ProductStem:
    """Stem of the ordered product of conjugate monomials over members"""
    factors = [AxialFactor.one() for _ in range(n)]
    for h in members:
        factors[h - 1] = factors[h - 1] * AxialFactor.conj_monomial()
    return ProductStem(n, [ProductTerm(tuple(factors), ONE)])
