"""
Slice functions induced by stems: f(x) = sum_K J_K F_K(z).
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError
from .logging import get_logger
from .quat import Quaternion, SplitForm, join, qmul_array, split
from .stem import (
    ComplexPoint, IndexSet, StemFunction, imaginary_stem, stem_spherical_derivative,
    stem_spherical_value, stem_tensor,
)
from .validation import validate_point_document

logger = get_logger(__name__)

UNIT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class QPoint:
    """x = (x_1, ..., x_n) in H^n"""
    coords: Tuple[Quaternion, ...]

    @classmethod
    def of(cls, values: Iterable[Union[Quaternion, float, Sequence[float]]]) -> "QPoint":
        return cls(tuple(Quaternion.coerce(v) for v in values))

    @classmethod
    def from_document(cls, document, n: Optional[int] = None) -> "QPoint":
        validate_point_document(document, n)
        return cls(tuple(Quaternion.from_sequence(c) for c in document))

    @classmethod
    def from_array(cls, array: np.ndarray) -> "QPoint":
        return cls(tuple(Quaternion(*row) for row in array))

    @property
    def n(self) -> int:
        return len(self.coords)

    def split_forms(self) -> Tuple[SplitForm, ...]:
        return tuple(split(q) for q in self.coords)

    def complex_point(self) -> ComplexPoint:
        return ComplexPoint(tuple((s.alpha, s.beta) for s in self.split_forms()))

    def with_unit(self, h: int, jprime: Quaternion) -> "QPoint":
        """Same (alpha_h, beta_h), imaginary unit J_h replaced by jprime"""
        s = split(self.coords[h - 1])
        coords = list(self.coords)
        coords[h - 1] = join(s.alpha, s.beta, jprime)
        return QPoint(tuple(coords))

    def to_array(self) -> np.ndarray:
        return np.array([q.to_list() for q in self.coords], dtype=float)

    def to_document(self) -> list:
        return [q.to_list() for q in self.coords]


def unit_products(units: Sequence[Quaternion]) -> np.ndarray:
    """Rows J_K = J_{k1} ... J_{kp} for every bitmask K, increasing order inside each product"""
    size = 1 << len(units)
    table = np.zeros((size, 4))
    table[0, 0] = 1.0
    for bits in range(1, size):
        top = bits.bit_length() - 1
        rest = bits ^ (1 << top)
        table[bits] = qmul_array(table[rest], units[top].to_array())
    return table


def combine_components(units: Sequence[Quaternion], comps: np.ndarray) -> Quaternion:
    """sum_K J_K F_K"""
    return Quaternion(*qmul_array(unit_products(units), comps).sum(axis=0))


@dataclass(frozen=True, eq=False)
class SliceFunction:
    stem: StemFunction

    @property
    def n(self) -> int:
        return self.stem.n

    @property
    def exact(self) -> bool:
        return self.stem.exact

    def __call__(self, x: QPoint) -> Quaternion:
        return slice_eval(self, x)

    def spherical_value(self, H: IndexSet) -> "SliceFunction":
        return SliceFunction(stem_spherical_value(self.stem, H))

    def spherical_derivative(self, H: IndexSet) -> "SliceFunction":
        return SliceFunction(stem_spherical_derivative(self.stem, H))


def _check_point(f: SliceFunction, x: QPoint) -> None:
    if x.n != f.n:
        raise DomainError(f"point has {x.n} coordinates, function has {f.n} variables")


def slice_eval(f: SliceFunction, x: QPoint) -> Quaternion:
    _check_point(f, x)
    forms = x.split_forms()
    z = ComplexPoint(tuple((s.alpha, s.beta) for s in forms))
    return combine_components([s.j for s in forms], f.stem(z).comps)


def slice_eval_closure(f: SliceFunction, x: QPoint) -> Quaternion:
    """Same as slice_eval but always through the stem closures"""
    _check_point(f, x)
    forms = x.split_forms()
    z = ComplexPoint(tuple((s.alpha, s.beta) for s in forms))
    return combine_components([s.j for s in forms], f.stem.via_closure(z).comps)


def slice_eval_batch(f: SliceFunction, points: np.ndarray) -> np.ndarray:
    """Values at points of shape (N, n, 4); vectorised for exact stems"""
    if f.stem.closed_form is not None:
        return f.stem.closed_form.evaluate_slice_batch(points)
    return np.array([slice_eval(f, QPoint.from_array(p)).to_list() for p in points])


def slice_product(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    """f (.) g, induced by the tensor product of the stems"""
    if f.n != g.n:
        raise DomainError(f"slice product of functions in {f.n} and {g.n} variables")
    return SliceFunction(stem_tensor(f.stem, g.stem))


def imaginary_part(n: int, h: int) -> SliceFunction:
    """Im(x_h) as a slice function"""
    return SliceFunction(imaginary_stem(n, h))


def _check_unit(jprime: Quaternion) -> None:
    if abs(jprime.w) > UNIT_TOLERANCE or abs(jprime.norm() - 1.0) > UNIT_TOLERANCE:
        raise DomainError(f"{jprime} is not a unit imaginary quaternion")


def circularity_residual(f: SliceFunction, h: int, x: QPoint, jprime: Quaternion) -> float:
    """|f(x) - f(x with J_h replaced by jprime)|"""
    if not 1 <= h <= f.n:
        raise DomainError(f"variable index {h} out of range 1..{f.n}")
    _check_unit(jprime)
    return (slice_eval(f, x) - slice_eval(f, x.with_unit(h, jprime))).norm()


def sliceness_check(F: StemFunction, H: IndexSet, circular: bool = False) -> bool:
    """Support test for S_H, or for S_{c,H} when circular is set.

    S_{c,H}: every component e_K with K meeting H vanishes.
    S_H: components are allowed on K inside H^c and on {h} cup Q with h in H and
    Q inside {h+1, ..., n} minus H. The second rule depends on the order of the variables.
    """
    support = F.support()
    if circular:
        return all(not k & H.bits for k in support)
    for k in support:
        if not k & H.bits:
            continue
        inside = k & H.bits
        if inside & (inside - 1):
            return False
        h = inside.bit_length()
        rest = k & ~H.bits
        if rest & ((1 << h) - 1):
            return False
    return True
