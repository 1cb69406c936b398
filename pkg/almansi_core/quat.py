"""
Quaternion arithmetic and the alpha + J*beta splitting used throughout slice analysis.

Scalar quaternions are small immutable value objects; batches of quaternions used by the
Monte Carlo code are plain numpy arrays with a trailing axis of length 4 (w, x, y, z).
"""

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DomainError, InputFormatError

Real = Union[int, float]


class Quaternion:
    """Element w + x*i + y*j + z*k of H"""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w: Real = 0.0, x: Real = 0.0, y: Real = 0.0, z: Real = 0.0):
        object.__setattr__(self, "w", float(w))
        object.__setattr__(self, "x", float(x))
        object.__setattr__(self, "y", float(y))
        object.__setattr__(self, "z", float(z))

    def __setattr__(self, name, value):
        raise AttributeError("Quaternion is immutable")

    @classmethod
    def real(cls, value: Real) -> "Quaternion":
        return cls(value, 0.0, 0.0, 0.0)

    @classmethod
    def from_sequence(cls, values: Sequence[Real]) -> "Quaternion":
        if len(values) != 4:
            raise InputFormatError(f"quaternion needs 4 coordinates, got {len(values)}")
        if not all(math.isfinite(float(v)) for v in values):
            raise InputFormatError(f"quaternion coordinates must be finite: {list(values)}")
        return cls(*values)

    @classmethod
    def coerce(cls, value: Union["Quaternion", Real, Sequence[Real]]) -> "Quaternion":
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, (int, float)):
            return cls.real(value)
        return cls.from_sequence(value)

    # arithmetic
    def __add__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w + other, self.x, self.y, self.z)
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w - other, self.x, self.y, self.z)
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return Quaternion(other - self.w, -self.x, -self.y, -self.z)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        aw, ax, ay, az = self.w, self.x, self.y, self.z
        bw, bx, by, bz = other.w, other.x, other.y, other.z
        return Quaternion(
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, float)):
            other = Quaternion.real(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return (self.w, self.x, self.y, self.z) == (other.w, other.x, other.y, other.z)

    def __hash__(self):
        return hash((self.w, self.x, self.y, self.z))

    def __iter__(self):
        return iter((self.w, self.x, self.y, self.z))

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"

    def __str__(self):
        return format_quaternion(self)

    # structure
    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def __abs__(self) -> float:
        return self.norm()

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise DomainError("zero quaternion has no inverse")
        return self.conj() / n2

    @property
    def re(self) -> float:
        return self.w

    @property
    def im(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    def imag_norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def is_real(self) -> bool:
        return self.x == 0.0 and self.y == 0.0 and self.z == 0.0

    def to_list(self) -> list:
        return [self.w, self.x, self.y, self.z]

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)


ZERO = Quaternion(0.0, 0.0, 0.0, 0.0)
ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def format_quaternion(q: Quaternion, precision: int = 12) -> str:
    """Compact text form, e.g. 1+2i-3k"""
    parts = []
    for value, unit in zip(q, ("", "i", "j", "k")):
        if value == 0.0:
            continue
        text = f"{value:.{precision}g}"
        if unit and text in ("1", "-1"):
            text = text[:-1]
        if parts and not text.startswith("-"):
            text = "+" + text
        parts.append(text + unit)
    return "".join(parts) if parts else "0"


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a*b"""
    return a * b


@dataclass(frozen=True)
class SplitForm:
    """q = alpha + j*beta with beta >= 0 and j a unit imaginary"""
    alpha: float
    beta: float
    j: Quaternion

    def join(self) -> Quaternion:
        return join(self.alpha, self.beta, self.j)


def split(q: Quaternion) -> SplitForm:
    """Split q as alpha + J*beta; real points get the canonical J = i"""
    beta = q.imag_norm()
    if beta == 0.0:
        return SplitForm(q.w, 0.0, I)
    return SplitForm(q.w, beta, Quaternion(0.0, q.x / beta, q.y / beta, q.z / beta))


def join(alpha: float, beta: float, j: Quaternion) -> Quaternion:
    return Quaternion(alpha + j.w * beta, j.x * beta, j.y * beta, j.z * beta)


def ordered_product(qs: Sequence[Quaternion], members: Iterable[int]) -> Quaternion:
    """q_{k1}*...*q_{kp} over the 1-based indices in increasing order; empty product is 1"""
    result = ONE
    for index in sorted(members):
        if index < 1 or index > len(qs):
            raise DomainError(f"variable index {index} out of range 1..{len(qs)}")
        result = result * qs[index - 1]
    return result


def random_unit_imaginary(rng: np.random.Generator) -> Quaternion:
    """Uniform element of the sphere of imaginary units"""
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    return Quaternion(0.0, v[0], v[1], v[2])


# batched helpers, arrays of shape (..., 4)

def qmul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ], axis=-1)


def qconj_array(a: np.ndarray) -> np.ndarray:
    return a * np.array([1.0, -1.0, -1.0, -1.0])


def real_array(values: np.ndarray) -> np.ndarray:
    """Embed real values of shape (...) as quaternions of shape (..., 4)"""
    out = np.zeros(values.shape + (4,))
    out[..., 0] = values
    return out
