"""
Stem functions F: D -> H (x) R^{2^n}.

Values are stored densely: row K (a bitmask, bit h-1 for variable h) of a (2^n, 4) array holds the
quaternion F_K(z). Stems built from polynomials carry an exact ProductStem next to their closure;
evaluation prefers the exact form and `via_closure` always walks the closure chain, so the two paths
can be checked against each other.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .closed_form import AxialFactor, ProductStem
from .differences import default_step, derivative, check_step
from .errors import CapabilityError, DomainError, SingularPointError
from .logging import get_logger
from .quat import Quaternion, qmul_array

logger = get_logger(__name__)

MAX_VARIABLES = 6
_POPCOUNT = np.array([bin(i).count("1") for i in range(1 << MAX_VARIABLES)])


def _check_n(n: int) -> int:
    if not isinstance(n, int) or not 1 <= n <= MAX_VARIABLES:
        raise DomainError(f"variable count {n} out of range 1..{MAX_VARIABLES}")
    return n


@dataclass(frozen=True, order=True)
class IndexSet:
    """Subset of {1, ..., n} stored as a bitmask"""
    bits: int
    n: int

    def __post_init__(self):
        _check_n(self.n)
        if not 0 <= self.bits < (1 << self.n):
            raise DomainError(f"bitmask {self.bits} does not describe a subset of 1..{self.n}")

    @classmethod
    def of(cls, n: int, members: Iterable[int] = ()) -> "IndexSet":
        _check_n(n)
        bits = 0
        for h in members:
            if not isinstance(h, (int, np.integer)) or not 1 <= h <= n:
                raise DomainError(f"variable index {h} out of range 1..{n}")
            bits |= 1 << (int(h) - 1)
        return cls(bits, n)

    @classmethod
    def empty(cls, n: int) -> "IndexSet":
        return cls(0, n)

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls((1 << n) - 1, n)

    @classmethod
    def interval(cls, n: int, m: int) -> "IndexSet":
        """{1, ..., m}"""
        if not 0 <= m <= n:
            raise DomainError(f"interval bound {m} out of range 0..{n}")
        return cls((1 << m) - 1, n)

    @property
    def members(self) -> Tuple[int, ...]:
        return tuple(h + 1 for h in range(self.n) if self.bits >> h & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return int(_POPCOUNT[self.bits])

    def __contains__(self, h: int) -> bool:
        return 1 <= h <= self.n and bool(self.bits >> (h - 1) & 1)

    def _same(self, other: "IndexSet") -> None:
        if other.n != self.n:
            raise DomainError(f"index sets over {self.n} and {other.n} variables")

    def __or__(self, other: "IndexSet") -> "IndexSet":
        self._same(other)
        return IndexSet(self.bits | other.bits, self.n)

    def __and__(self, other: "IndexSet") -> "IndexSet":
        self._same(other)
        return IndexSet(self.bits & other.bits, self.n)

    def __xor__(self, other: "IndexSet") -> "IndexSet":
        self._same(other)
        return IndexSet(self.bits ^ other.bits, self.n)

    def __sub__(self, other: "IndexSet") -> "IndexSet":
        self._same(other)
        return IndexSet(self.bits & ~other.bits, self.n)

    def complement(self) -> "IndexSet":
        return IndexSet(((1 << self.n) - 1) & ~self.bits, self.n)

    def issubset(self, other: "IndexSet") -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    def subsets(self) -> List["IndexSet"]:
        """All subsets in increasing bitmask order"""
        return [IndexSet(b, self.n) for b in range(1 << self.n) if b & ~self.bits == 0]

    def is_interval(self) -> bool:
        return self.bits & (self.bits + 1) == 0

    def label(self) -> str:
        return "{" + ",".join(str(h) for h in self.members) + "}"

    def __str__(self):
        return self.label()


def all_subsets(n: int) -> List[IndexSet]:
    return IndexSet.full(n).subsets()


def popcount(bits: int) -> int:
    return int(_POPCOUNT[bits])


@dataclass(frozen=True)
class ComplexPoint:
    """z = (alpha_1 + i*beta_1, ..., alpha_n + i*beta_n)"""
    coords: Tuple[Tuple[float, float], ...]

    @classmethod
    def of(cls, pairs: Iterable[Tuple[float, float]]) -> "ComplexPoint":
        return cls(tuple((float(a), float(b)) for a, b in pairs))

    @classmethod
    def from_complex(cls, values: Iterable[complex]) -> "ComplexPoint":
        return cls(tuple((complex(v).real, complex(v).imag) for v in values))

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def alphas(self) -> Tuple[float, ...]:
        return tuple(a for a, _ in self.coords)

    @property
    def betas(self) -> Tuple[float, ...]:
        return tuple(b for _, b in self.coords)

    def conj(self, h: int) -> "ComplexPoint":
        """z-bar^h: flip the sign of beta_h"""
        return self.replace(h, beta=-self.coords[h - 1][1])

    def replace(self, h: int, alpha: Optional[float] = None, beta: Optional[float] = None) -> "ComplexPoint":
        coords = list(self.coords)
        a, b = coords[h - 1]
        coords[h - 1] = (a if alpha is None else float(alpha), b if beta is None else float(beta))
        return ComplexPoint(tuple(coords))


def tensor_components(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(F x G)_M = sum over K delta H = M of (-1)^{|K cap H|} F_K G_H"""
    size = a.shape[0]
    idx = np.arange(size)
    out = np.zeros_like(a)
    for k in range(size):
        signs = np.where(_POPCOUNT[k & idx] % 2 == 1, -1.0, 1.0)
        prod = qmul_array(np.broadcast_to(a[k], b.shape), b) * signs[:, None]
        out[k ^ idx] += prod
    return out


@dataclass(frozen=True, eq=False)
class StemValue:
    """sum_K e_K F_K(z)"""
    n: int
    comps: np.ndarray

    def __getitem__(self, key: Union[IndexSet, int]) -> Quaternion:
        bits = key.bits if isinstance(key, IndexSet) else key
        return Quaternion(*self.comps[bits])

    def __add__(self, other: "StemValue") -> "StemValue":
        return StemValue(self.n, self.comps + other.comps)

    def __sub__(self, other: "StemValue") -> "StemValue":
        return StemValue(self.n, self.comps - other.comps)

    def tensor(self, other: "StemValue") -> "StemValue":
        return StemValue(self.n, tensor_components(self.comps, other.comps))

    def max_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.comps, axis=1)))

    def max_abs_diff(self, other: "StemValue") -> float:
        return float(np.max(np.linalg.norm(self.comps - other.comps, axis=1)))

    def to_dict(self) -> dict:
        return {str(bits): [float(c) for c in row] for bits, row in enumerate(self.comps)}


class Provenance(str, Enum):
    POLYNOMIAL = "polynomial"
    BUILTIN = "builtin"
    DERIVED = "derived"


Evaluator = Callable[[ComplexPoint], np.ndarray]


@dataclass(frozen=True, eq=False)
class StemFunction:
    n: int
    evaluator: Evaluator
    domain_excludes: IndexSet
    provenance: Provenance
    closed_form: Optional[ProductStem] = None
    known_support: Optional[FrozenSet[int]] = None
    label: str = ""

    def __post_init__(self):
        _check_n(self.n)

    def _point(self, z: ComplexPoint) -> ComplexPoint:
        if z.n != self.n:
            raise DomainError(f"point has {z.n} coordinates, stem has {self.n} variables")
        return z

    def __call__(self, z: ComplexPoint) -> StemValue:
        z = self._point(z)
        if self.closed_form is not None:
            return StemValue(self.n, self.closed_form.evaluate(z.alphas, z.betas))
        return StemValue(self.n, self.evaluator(z))

    def via_closure(self, z: ComplexPoint) -> StemValue:
        return StemValue(self.n, self.evaluator(self._point(z)))

    @property
    def exact(self) -> bool:
        return self.closed_form is not None

    def support(self) -> FrozenSet[int]:
        """Bitmasks of the components that are not identically zero"""
        if self.closed_form is not None:
            return self.closed_form.support()
        if self.known_support is not None:
            return self.known_support
        raise CapabilityError(f"component support of stem {self.label or '<closure>'} is not known exactly")

    def _support_or_none(self) -> Optional[FrozenSet[int]]:
        try:
            return self.support()
        except CapabilityError:
            return None


# builtins

def _single_component(n: int, h: int, real_part: Callable, imag_part: Callable) -> Evaluator:
    bit = 1 << (h - 1)

    def evaluate(z: ComplexPoint) -> np.ndarray:
        alpha, beta = z.coords[h - 1]
        out = np.zeros((1 << n, 4))
        out[0, 0] = real_part(alpha, beta)
        out[bit, 0] = imag_part(alpha, beta)
        return out
    return evaluate


def const_stem(n: int, value: Union[Quaternion, float, Sequence[float]]) -> StemFunction:
    q = Quaternion.coerce(value)
    row = q.to_array()

    def evaluate(z: ComplexPoint) -> np.ndarray:
        out = np.zeros((1 << n, 4))
        out[0] = row
        return out
    return StemFunction(n, evaluate, IndexSet.empty(n), Provenance.BUILTIN,
                        closed_form=ProductStem.constant(n, q), label=f"const({q})")


def make_builtin_stem(kind: str, n: int, arg: Union[int, Quaternion, float, Sequence[float]] = 1) -> StemFunction:
    """monomial / conj_monomial / exp in variable arg, or constant with value arg"""
    _check_n(n)
    if kind == "constant":
        return const_stem(n, arg)
    if kind not in ("monomial", "conj_monomial", "exp"):
        raise DomainError(f"unknown builtin stem kind '{kind}'")
    h = arg
    if not isinstance(h, int) or not 1 <= h <= n:
        raise DomainError(f"variable index {h} out of range 1..{n}")
    empty = IndexSet.empty(n)
    if kind == "monomial":
        return StemFunction(n, _single_component(n, h, lambda a, b: a, lambda a, b: b), empty,
                            Provenance.BUILTIN, ProductStem.single(n, h, AxialFactor.monomial()),
                            label=f"x{h}")
    if kind == "conj_monomial":
        return StemFunction(n, _single_component(n, h, lambda a, b: a, lambda a, b: -b), empty,
                            Provenance.BUILTIN, ProductStem.single(n, h, AxialFactor.conj_monomial()),
                            label=f"conj(x{h})")
    evaluator = _single_component(n, h, lambda a, b: math.exp(a) * math.cos(b),
                                  lambda a, b: math.exp(a) * math.sin(b))
    return StemFunction(n, evaluator, empty, Provenance.BUILTIN,
                        known_support=frozenset({0, 1 << (h - 1)}), label=f"exp(x{h})")


def imaginary_stem(n: int, h: int) -> StemFunction:
    """Stem of Im(x_h): e_h -> beta_h"""
    return StemFunction(n, _single_component(n, h, lambda a, b: 0.0, lambda a, b: b), IndexSet.empty(n),
                        Provenance.BUILTIN, ProductStem.single(n, h, AxialFactor.imaginary()),
                        label=f"Im(x{h})")


# algebra

def stem_tensor(F: StemFunction, G: StemFunction) -> StemFunction:
    if F.n != G.n:
        raise DomainError(f"tensor product of stems in {F.n} and {G.n} variables")

    def evaluate(z: ComplexPoint) -> np.ndarray:
        return tensor_components(F.evaluator(z), G.evaluator(z))

    closed = F.closed_form.tensor(G.closed_form) if F.exact and G.exact else None
    support = None
    if closed is None:
        sf, sg = F._support_or_none(), G._support_or_none()
        if sf is not None and sg is not None:
            support = frozenset(k ^ h for k in sf for h in sg)
    return StemFunction(F.n, evaluate, F.domain_excludes | G.domain_excludes, Provenance.DERIVED,
                        closed, support, label=f"({F.label} x {G.label})")


def stem_sum(stems: Sequence[StemFunction]) -> StemFunction:
    if not stems:
        raise DomainError("empty stem sum")
    n = stems[0].n
    if any(s.n != n for s in stems):
        raise DomainError("stem sum over mismatched variable counts")

    def evaluate(z: ComplexPoint) -> np.ndarray:
        return sum((s.evaluator(z) for s in stems[1:]), stems[0].evaluator(z))

    excludes = IndexSet.empty(n)
    for s in stems:
        excludes = excludes | s.domain_excludes
    closed = None
    support = None
    if all(s.exact for s in stems):
        closed = stems[0].closed_form
        for s in stems[1:]:
            closed = closed + s.closed_form
    else:
        supports = [s._support_or_none() for s in stems]
        if all(sp is not None for sp in supports):
            support = frozenset().union(*supports)
    return StemFunction(n, evaluate, excludes, Provenance.DERIVED, closed, support,
                        label=" + ".join(s.label for s in stems))


def stem_scale(F: StemFunction, c: Union[Quaternion, float]) -> StemFunction:
    """Right multiplication F * c"""
    q = Quaternion.coerce(c)
    row = q.to_array()

    def evaluate(z: ComplexPoint) -> np.ndarray:
        values = F.evaluator(z)
        return qmul_array(values, np.broadcast_to(row, values.shape))

    closed = F.closed_form.scale_right(q) if F.exact else None
    return StemFunction(F.n, evaluate, F.domain_excludes, Provenance.DERIVED, closed,
                        None if closed is not None else F._support_or_none(), label=f"{F.label}*({q})")


def stem_spherical_value(F: StemFunction, H: IndexSet) -> StemFunction:
    """Keep the components e_K with K inside the complement of H"""
    mask = np.array([(k & H.bits) == 0 for k in range(1 << F.n)])

    def evaluate(z: ComplexPoint) -> np.ndarray:
        return F.evaluator(z) * mask[:, None]

    closed = F.closed_form.spherical_value(H.members) if F.exact else None
    support = None
    if closed is None:
        sf = F._support_or_none()
        support = None if sf is None else frozenset(k for k in sf if not k & H.bits)
    return StemFunction(F.n, evaluate, F.domain_excludes, Provenance.DERIVED, closed, support,
                        label=f"{F.label}°{H.label()}")


def stem_spherical_derivative(F: StemFunction, H: IndexSet) -> StemFunction:
    """F'_H = beta_H^{-1} sum_{K in H^c} e_K F_{K cup H}"""
    size = 1 << F.n
    rows = np.array([k for k in range(size) if not k & H.bits], dtype=int)
    members = H.members

    def evaluate(z: ComplexPoint) -> np.ndarray:
        betas = z.betas
        singular = tuple(h for h in members if betas[h - 1] == 0.0)
        if singular:
            raise SingularPointError(
                f"spherical derivative in {', '.join(f'x{h}' for h in singular)} at beta = 0",
                variables=singular)
        scale = 1.0
        for h in members:
            scale *= betas[h - 1]
        values = F.evaluator(z)
        out = np.zeros_like(values)
        out[rows] = values[rows | H.bits] / scale
        return out

    closed = F.closed_form.spherical_derivative(members) if F.exact else None
    support = None
    if closed is None:
        sf = F._support_or_none()
        if sf is not None:
            support = frozenset(k & ~H.bits for k in sf if k & H.bits == H.bits)
    return StemFunction(F.n, evaluate, F.domain_excludes | H, Provenance.DERIVED, closed, support,
                        label=f"{F.label}'{H.label()}")


def ordered_monomial_stem(n: int, K: IndexSet) -> StemFunction:
    """Stem of x_{k1} ... x_{kp}; the unit stem for K empty"""
    result = const_stem(n, 1.0)
    for h in K.members:
        result = stem_tensor(result, make_builtin_stem("monomial", n, h))
    return result


def conj_monomial_stem(n: int, K: IndexSet) -> StemFunction:
    """Stem of conj(x)_K, the ordered product of conjugate monomials"""
    result = const_stem(n, 1.0)
    for h in K.members:
        result = stem_tensor(result, make_builtin_stem("conj_monomial", n, h))
    return result


# checks

def stem_parity_residual(F: StemFunction, z: ComplexPoint) -> float:
    """max over h, K of |F_K(z-bar^h) - (-1)^{|K cap {h}|} F_K(z)|"""
    base = F(z).comps
    worst = 0.0
    for h in range(1, F.n + 1):
        bit = 1 << (h - 1)
        signs = np.array([-1.0 if k & bit else 1.0 for k in range(1 << F.n)])
        flipped = F(z.conj(h)).comps
        worst = max(worst, float(np.max(np.linalg.norm(flipped - signs[:, None] * base, axis=1))))
    return worst


def stem_cr_residual(F: StemFunction, h: int, z: ComplexPoint, step: Optional[float] = None) -> float:
    """Half the largest violation of the Cauchy-Riemann system in variable h; 0 for h-holomorphic stems"""
    if not 1 <= h <= F.n:
        raise DomainError(f"variable index {h} out of range 1..{F.n}")
    alpha, beta = z.coords[h - 1]
    step_alpha = check_step(step) if step is not None else default_step(alpha)
    step_beta = check_step(step) if step is not None else default_step(beta)
    d_alpha = derivative(lambda t: F(z.replace(h, alpha=t)).comps, alpha, step_alpha)
    d_beta = derivative(lambda t: F(z.replace(h, beta=t)).comps, beta, step_beta)
    bit = 1 << (h - 1)
    worst = 0.0
    for k in range(1 << F.n):
        if k & bit:
            continue
        first = np.linalg.norm(d_alpha[k] - d_beta[k | bit])
        second = np.linalg.norm(d_beta[k] + d_alpha[k | bit])
        worst = max(worst, float(first), float(second))
    return 0.5 * worst
