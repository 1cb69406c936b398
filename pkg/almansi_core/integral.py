"""
Monte Carlo checks of the sphere mean-value and Poisson formulas.

Samples are drawn in fixed-size chunks, chunk i from the i-th child of SeedSequence(seed). Every chunk
keeps its own (count, sum, sum of squares) and chunks are merged in index order, so an estimate depends
only on (seed, nsamples), never on how many workers computed it.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError
from .logging import get_logger
from .monitoring import timed_operation
from .poly import QPolynomial, poly_component_closed_form
from .quat import ONE, Quaternion, qconj_array, qmul_array
from .slices import QPoint
from .stem import IndexSet
from .validation import validate_ball_points, validate_index_subset, validate_radii

logger = get_logger(__name__)

CHUNK_SIZE = 4096
SIGMA_FACTOR = 3.0
ABSOLUTE_FLOOR = 1e-3


class MeanValueFormula(str, Enum):
    COMPONENTS = "components"
    FIRST = "first"
    SECOND = "second"
    REAL_CENTRE = "H"


class PoissonFormula(str, Enum):
    COMPONENTS = "components"
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class MCEstimate:
    value: Quaternion
    stderr: float
    samples: int
    seed: int

    def residual(self, target: Quaternion) -> float:
        """Componentwise max |value - target|"""
        return float(np.max(np.abs((self.value - target).to_array())))

    def tolerance(self, floor: float = ABSOLUTE_FLOOR, sigmas: float = SIGMA_FACTOR) -> float:
        return max(sigmas * self.stderr, floor)

    def accepts(self, target: Quaternion, floor: float = ABSOLUTE_FLOOR, sigmas: float = SIGMA_FACTOR) -> bool:
        residual = self.residual(target)
        ok = residual <= self.tolerance(floor, sigmas)
        if ok and residual > sigmas * self.stderr:
            logger.warning(f"estimate accepted only through the absolute floor: residual {residual:.3g}, "
                           f"{sigmas:g} stderr = {sigmas * self.stderr:.3g}")
        return ok

    def to_document(self) -> dict:
        return {"value": self.value.to_list(), "stderr": self.stderr, "samples": self.samples, "seed": self.seed}


class SampleAccumulator:
    """Running count, sum and sum of squares of quaternion samples"""

    def __init__(self):
        self.count = 0
        self.total = np.zeros(4)
        self.total_sq = np.zeros(4)

    def add(self, values: np.ndarray) -> "SampleAccumulator":
        self.count += values.shape[0]
        self.total = self.total + values.sum(axis=0)
        self.total_sq = self.total_sq + (values ** 2).sum(axis=0)
        return self

    def merge(self, other: "SampleAccumulator") -> "SampleAccumulator":
        self.count += other.count
        self.total = self.total + other.total
        self.total_sq = self.total_sq + other.total_sq
        return self

    def estimate(self, seed: int) -> MCEstimate:
        if self.count == 0:
            raise DomainError("no samples accumulated")
        mean = self.total / self.count
        if self.count > 1:
            var = np.maximum(self.total_sq - self.count * mean ** 2, 0.0) / (self.count - 1)
            stderr = float(np.max(np.sqrt(var / self.count)))
        else:
            stderr = 0.0
        return MCEstimate(Quaternion(*mean), stderr, self.count, seed)


# sampling

def sample_s3_batch(rng: np.random.Generator, shape: Union[int, Tuple[int, ...]]) -> np.ndarray:
    """Uniform points of the unit sphere of H, as arrays of shape shape + (4,)"""
    shape = (shape,) if isinstance(shape, int) else tuple(shape)
    g = rng.standard_normal(shape + (4,))
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def sample_s3(rng: np.random.Generator) -> Quaternion:
    return Quaternion(*sample_s3_batch(rng, 1)[0])


def poisson_kernel(x: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """(1 - |x|^2) / |x - xi|^4 for one interior point x and sphere samples xi of shape (N, 4); 1 at x = 0"""
    if not np.any(x):
        return np.ones(xi.shape[0])
    dist2 = np.sum((xi - x) ** 2, axis=-1)
    return (1.0 - float(np.dot(x, x))) / dist2 ** 2


Integrand = Callable[[np.ndarray], np.ndarray]


def _chunk_sizes(nsamples: int) -> List[int]:
    full, rest = divmod(nsamples, CHUNK_SIZE)
    return [CHUNK_SIZE] * full + ([rest] if rest else [])


@timed_operation("monte_carlo")
def monte_carlo(integrand: Integrand, dims: int, nsamples: int, seed: int, workers: int = 1) -> MCEstimate:
    """E[integrand(xi)] with xi uniform on (S^3)^dims; integrand maps (N, dims, 4) to (N, 4)"""
    if nsamples < 1:
        raise DomainError(f"need at least one sample, got {nsamples}")
    sizes = _chunk_sizes(nsamples)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def run_chunk(index: int) -> SampleAccumulator:
        rng = np.random.default_rng(children[index])
        return SampleAccumulator().add(integrand(sample_s3_batch(rng, (sizes[index], dims))))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_chunk, range(len(sizes))))
    else:
        parts = [run_chunk(i) for i in range(len(sizes))]
    total = SampleAccumulator()
    for part in parts:
        total.merge(part)
    return total.estimate(seed)


# formula assembly

def _centre_array(P: QPolynomial, a) -> np.ndarray:
    coords = [Quaternion.coerce(q) for q in (a.coords if hasattr(a, "coords") else a)]
    if len(coords) != P.n:
        raise DomainError(f"centre has {len(coords)} coordinates, polynomial has {P.n} variables")
    return np.array([q.to_list() for q in coords], dtype=float)


def _interior_array(x, count: int) -> np.ndarray:
    coords = [Quaternion.coerce(q) for q in (x.coords if hasattr(x, "coords") else x)]
    if len(coords) != count:
        raise DomainError(f"need {count} interior points, got {len(coords)}")
    validate_ball_points([q.norm() for q in coords])
    return np.array([q.to_list() for q in coords], dtype=float)


def _ordered_constant(values: Sequence[np.ndarray]) -> np.ndarray:
    out = ONE.to_array()
    for v in values:
        out = qmul_array(out, v)
    return out


class _Assembly:
    """Shared layout of the mean-value (x = None) and Poisson integrands over the variables of H"""

    def __init__(self, P: QPolynomial, a, radii: Sequence[float], H: IndexSet, x=None):
        self.P = P
        self.H = H
        self.members = H.members
        self.centre = _centre_array(P, a)
        self.radii = validate_radii(radii, max(self.members))
        self.x = None if x is None else _interior_array(x, len(self.members))

    def shifted_centre(self) -> np.ndarray:
        """a + sum_{h in H} r_h x_h"""
        y = self.centre.copy()
        if self.x is not None:
            for idx, h in enumerate(self.members):
                y[h - 1] = y[h - 1] + self.radii[h - 1] * self.x[idx]
        return y

    def points(self, xi: np.ndarray, upto: int) -> np.ndarray:
        """Centre moved by r xi on the first `upto` variables of H and by r x on the rest"""
        pts = np.broadcast_to(self.centre, (xi.shape[0],) + self.centre.shape).copy()
        for idx, h in enumerate(self.members):
            if idx < upto:
                pts[:, h - 1] += self.radii[h - 1] * xi[:, idx]
            elif self.x is not None:
                pts[:, h - 1] += self.radii[h - 1] * self.x[idx]
        return pts

    def kernels(self, xi: np.ndarray) -> np.ndarray:
        """Running products of the Poisson kernels, column t = prod_{s <= t} P(x_s, xi_s)"""
        out = np.ones((xi.shape[0], len(self.members)))
        running = np.ones(xi.shape[0])
        for idx in range(len(self.members)):
            if self.x is not None:
                running = running * poisson_kernel(self.x[idx], xi[:, idx])
            out[:, idx] = running
        return out

    def component(self, K: IndexSet):
        return poly_component_closed_form(self.P, self.H, K)


def _components_integrand(asm: _Assembly, K: IndexSet) -> Integrand:
    expr = asm.component(K)
    full = len(asm.members)

    def integrand(xi: np.ndarray) -> np.ndarray:
        return expr.evaluate_batch(asm.points(xi, full)) * asm.kernels(xi)[:, -1:]
    return integrand


def _first_integrand(asm: _Assembly, real_weights: bool) -> Integrand:
    """sum_{K in H} (-1)^{|H minus K|} w_{H minus K} S^H_K, w = conj(a + r x) or the real centres"""
    y = asm.shifted_centre()
    full = len(asm.members)
    terms = []
    for K in asm.H.subsets():
        rest = asm.H - K
        if real_weights:
            weight = np.array([float(np.prod([y[h - 1, 0] for h in rest.members])), 0.0, 0.0, 0.0])
        else:
            weight = _ordered_constant([qconj_array(y[h - 1]) for h in rest.members])
        sign = -1.0 if len(rest) % 2 else 1.0
        terms.append((sign * weight, asm.component(K)))

    def integrand(xi: np.ndarray) -> np.ndarray:
        pts = asm.points(xi, full)
        total = np.zeros((xi.shape[0], 4))
        for weight, expr in terms:
            total += qmul_array(np.broadcast_to(weight, (xi.shape[0], 4)), expr.evaluate_batch(pts))
        return total * asm.kernels(xi)[:, -1:]
    return integrand


def _second_integrand(asm: _Assembly) -> Integrand:
    """sum_{j<m} r_{1..j} (conj(xi) - conj(x))_{1..j} S^j_empty(a + r xi on 1..j+1) + the j = m term"""
    n, m = asm.P.n, len(asm.members)
    heads = [asm.P] + [poly_component_closed_form(asm.P, IndexSet.interval(n, j), IndexSet.empty(n))
                       for j in range(1, m + 1)]

    def integrand(xi: np.ndarray) -> np.ndarray:
        count = xi.shape[0]
        kernels = asm.kernels(xi)
        total = np.zeros((count, 4))
        factor = np.zeros((count, 4))
        factor[:, 0] = 1.0
        for j in range(m + 1):
            if j > 0:
                step = qconj_array(xi[:, j - 1])
                if asm.x is not None:
                    step = step - qconj_array(asm.x[j - 1])
                factor = qmul_array(factor, step) * asm.radii[j - 1]
            upto = min(j + 1, m)
            values = heads[j].evaluate_batch(asm.points(xi, upto))
            total += qmul_array(factor, values) * kernels[:, upto - 1:upto]
        return total
    return integrand


def _interval_or_set(n: int, m: int, H: Optional[IndexSet]) -> IndexSet:
    if H is not None:
        if H.n != n or not H.bits:
            raise DomainError(f"index set {H.label()} must be a nonempty subset of 1..{n}")
        return H
    if not 1 <= m <= n:
        raise DomainError(f"m = {m} out of range 1..{n}")
    return IndexSet.interval(n, m)


def _component_set(H: IndexSet, K: Optional[IndexSet]) -> IndexSet:
    K = K if K is not None else IndexSet.empty(H.n)
    validate_index_subset(K.members, H.members)
    return K


def mean_value_check(P: QPolynomial, a, radii: Sequence[float], m: int,
                     formula: Union[MeanValueFormula, str], nsamples: int, seed: int,
                     K: Optional[IndexSet] = None, H: Optional[IndexSet] = None,
                     workers: int = 1) -> Tuple[Quaternion, MCEstimate]:
    """Exact left side and Monte Carlo right side of a sphere mean-value formula.

    components: S^H_K(f)(a) = E[S^H_K(f)(a + sum_{h in H} r_h lambda_h)]
    first:      f(a) = sum_{K in {1..m}} (-1)^{|K^c|} conj(a)_{K^c} E[S^m_K(f)(a + sum_{i<=m} r_i lambda_i)]
    second:     f(a) = sum_{j<m} r_{1..j} E[conj(lambda)_{1..j} S^j_empty(f)(a + sum_{i<=j+1} r_i lambda_i)]
                       + r_{1..m} E[conj(lambda)_{1..m} S^m_empty(f)(a + sum_{i<=m} r_i lambda_i)]
    H:          f(a) = sum_{K in H} (-1)^{|H minus K|} a_{H minus K} E[S^H_K(f)(...)], a_h real for h in H
    """
    formula = MeanValueFormula(formula)
    if formula in (MeanValueFormula.FIRST, MeanValueFormula.SECOND):
        H = None
    H = _interval_or_set(P.n, m, H)
    asm = _Assembly(P, a, radii, H)
    centre = QPoint.from_array(asm.centre)
    if formula == MeanValueFormula.COMPONENTS:
        K = _component_set(H, K)
        lhs = asm.component(K).evaluate(centre)
        integrand = _components_integrand(asm, K)
    else:
        lhs = P.evaluate(centre)
        if formula == MeanValueFormula.REAL_CENTRE:
            nonreal = [h for h in H.members if np.any(asm.centre[h - 1, 1:])]
            if nonreal:
                raise DomainError(f"centre coordinates {nonreal} must be real for the formula over H={H.label()}")
            integrand = _first_integrand(asm, real_weights=True)
        elif formula == MeanValueFormula.FIRST:
            integrand = _first_integrand(asm, real_weights=False)
        else:
            integrand = _second_integrand(asm)
    logger.debug(f"mean-value formula {formula.value} over H={H.label()} with {nsamples} samples, seed {seed}")
    return lhs, monte_carlo(integrand, len(H), nsamples, seed, workers)


def poisson_check(P: QPolynomial, a, radii: Sequence[float], x, m: int,
                  formula: Union[PoissonFormula, str], nsamples: int, seed: int,
                  K: Optional[IndexSet] = None, workers: int = 1) -> Tuple[Quaternion, MCEstimate]:
    """Exact f(a + sum r_h x_h) (or S^m_K at that point) against the kernel-weighted sphere integral.

    first:      sum_{K in {1..m}} (-1)^{|K^c|} conj(a + r x)_{K^c} E[S^m_K(f)(a + sum r xi) prod P(x_j, xi_j)]
    second:     sum_{j<m} r_{1..j} E[(conj(xi) - conj(x))_{1..j} S^j_empty(f)(a + sum_{i<=j+1} r_i xi_i
                + sum_{i>j+1} r_i x_i) prod_{t<=j+1} P(x_t, xi_t)] + the j = m term
    components: S^m_K(f)(a + sum r x) = E[S^m_K(f)(a + sum r xi) prod P(x_j, xi_j)]
    """
    formula = PoissonFormula(formula)
    H = _interval_or_set(P.n, m, None)
    asm = _Assembly(P, a, radii, H, x=x)
    y = QPoint.from_array(asm.shifted_centre())
    if formula == PoissonFormula.COMPONENTS:
        K = _component_set(H, K)
        lhs = asm.component(K).evaluate(y)
        integrand = _components_integrand(asm, K)
    elif formula == PoissonFormula.FIRST:
        lhs = P.evaluate(y)
        integrand = _first_integrand(asm, real_weights=False)
    else:
        lhs = P.evaluate(y)
        integrand = _second_integrand(asm)
    logger.debug(f"Poisson formula {formula.value} for m={m} with {nsamples} samples, seed {seed}")
    return lhs, monte_carlo(integrand, len(H), nsamples, seed, workers)
