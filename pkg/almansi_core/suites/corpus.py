"""
Seeded random polynomials and evaluation points for the verification suites
"""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional

import numpy as np

from ..config import SuiteSettings
from ..poly import QPolynomial
from ..quat import Quaternion, join, random_unit_imaginary
from ..slices import QPoint
from ..stem import ComplexPoint


def random_coefficient(rng: np.random.Generator, real: bool = False) -> Quaternion:
    w, x, y, z = rng.uniform(-1.0, 1.0, size=4)
    return Quaternion(w) if real else Quaternion(w, x, y, z)


def random_polynomial(rng: np.random.Generator, n: int, max_degree: int, max_terms: int,
                      real: bool = False, min_variable: int = 1) -> QPolynomial:
    """Up to max_terms monomials of total degree <= max_degree in x_{min_variable}..x_n"""
    count = int(rng.integers(1, max_terms + 1))
    active = n - min_variable + 1
    terms = []
    for _ in range(count):
        degree = int(rng.integers(0, max_degree + 1))
        spread = rng.multinomial(degree, [1.0 / active] * active)
        alpha = (0,) * (min_variable - 1) + tuple(int(p) for p in spread)
        terms.append((alpha, random_coefficient(rng, real)))
    return QPolynomial(n, terms)


def random_point(rng: np.random.Generator, n: int, beta_min: float, beta_max: float) -> QPoint:
    """alpha_h uniform in [-1, 1], beta_h uniform in [beta_min, beta_max], J_h uniform"""
    return QPoint(tuple(
        join(float(rng.uniform(-1.0, 1.0)), float(rng.uniform(beta_min, beta_max)), random_unit_imaginary(rng))
        for _ in range(n)
    ))


def random_complex_point(rng: np.random.Generator, n: int, beta_min: float, beta_max: float) -> ComplexPoint:
    return ComplexPoint(tuple(
        (float(rng.uniform(-1.0, 1.0)), float(rng.uniform(beta_min, beta_max))) for _ in range(n)
    ))


def random_interior_point(rng: np.random.Generator, radius: float) -> Quaternion:
    """Uniform direction, norm uniform in [0, radius]"""
    direction = rng.standard_normal(4)
    direction /= np.linalg.norm(direction)
    return Quaternion(*(direction * rng.uniform(0.0, radius)))


@dataclass
class SuiteContext:
    """Settings, corpus and per-check generators shared by the checks of one run"""
    settings: SuiteSettings

    @property
    def seed(self) -> int:
        return self.settings.seed

    def rng(self, tag: str) -> np.random.Generator:
        """Generator depending only on (seed, tag), so checks do not disturb each other's streams"""
        key = [self.seed] + [ord(c) for c in tag]
        return np.random.default_rng(key)

    @cached_property
    def corpus(self) -> List[QPolynomial]:
        cfg = self.settings.corpus
        rng = self.rng("corpus")
        return [
            random_polynomial(rng, 1 + i % cfg.max_variables, cfg.max_degree, cfg.max_terms)
            for i in range(cfg.size)
        ]

    def points(self, P: QPolynomial, tag: str, count: Optional[int] = None) -> List[QPoint]:
        cfg = self.settings.corpus
        rng = self.rng(tag)
        return [random_point(rng, P.n, cfg.beta_min, cfg.beta_max) for _ in range(count or cfg.points)]
