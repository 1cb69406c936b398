"""
Central finite differences with one Richardson level.

Both stencils are fourth order; halving the step and combining (16*D(s/2) - D(s)) / 15 removes the
leading error term. Callables may return scalars or numpy arrays.
"""

from typing import Callable

import numpy as np

from .errors import StepSizeError

MIN_STEP = 1e-8
DEFAULT_RELATIVE_STEP = 1e-3


def default_step(coordinate: float) -> float:
    return DEFAULT_RELATIVE_STEP * (1.0 + abs(coordinate))


def check_step(step: float) -> float:
    if not step >= MIN_STEP:
        raise StepSizeError(f"finite-difference step {step:.3g} below {MIN_STEP:g}")
    return step


def _central4(func: Callable, x0: float, step: float):
    fp1 = np.asarray(func(x0 + step))
    fm1 = np.asarray(func(x0 - step))
    fp2 = np.asarray(func(x0 + 2 * step))
    fm2 = np.asarray(func(x0 - 2 * step))
    return (-fp2 / 12.0 + 2.0 * fp1 / 3.0 - 2.0 * fm1 / 3.0 + fm2 / 12.0) / step


def _second4(func: Callable, x0: float, step: float):
    f0 = np.asarray(func(x0))
    fp1 = np.asarray(func(x0 + step))
    fm1 = np.asarray(func(x0 - step))
    fp2 = np.asarray(func(x0 + 2 * step))
    fm2 = np.asarray(func(x0 - 2 * step))
    return (-fp2 / 12.0 + 4.0 * fp1 / 3.0 - 2.5 * f0 + 4.0 * fm1 / 3.0 - fm2 / 12.0) / step ** 2


def derivative(func: Callable, x0: float, step: float):
    """First derivative of func at x0"""
    check_step(step)
    coarse = _central4(func, x0, step)
    fine = _central4(func, x0, step / 2.0)
    return (16.0 * fine - coarse) / 15.0


def second_derivative(func: Callable, x0: float, step: float):
    check_step(step)
    coarse = _second4(func, x0, step)
    fine = _second4(func, x0, step / 2.0)
    return (16.0 * fine - coarse) / 15.0
