"""
Sphere mean-value formulas, estimated by seeded Monte Carlo
"""

from typing import List

import numpy as np

from ..integral import MCEstimate, MeanValueFormula, mean_value_check
from ..poly import QPolynomial
from ..quat import Quaternion
from ..slices import QPoint
from ..stem import IndexSet
from ..types import CheckResult, CheckStatus
from .base import verification_check
from .corpus import SuiteContext, random_point

SUITE = "meanvalue"

STREAM_AGREEMENT = 1e-9


def mc_polynomials(ctx: SuiteContext) -> List[QPolynomial]:
    """The first corpus polynomials, at least two of them in two or more variables"""
    count = ctx.settings.monte_carlo.polynomials
    wide = [P for P in ctx.corpus if P.n >= 2][: max(2, count // 2)]
    rest = [P for P in ctx.corpus if all(P is not Q for Q in wide)]
    return (wide + rest)[:count]


def mc_radii(rng: np.random.Generator, n: int) -> List[float]:
    return [float(r) for r in rng.uniform(0.2, 0.8, size=n)]


def normalised(lhs: Quaternion, estimate: MCEstimate, sigmas: float, floor: float) -> float:
    """Residual in units of the acceptance band max(sigmas * stderr, floor)"""
    return estimate.residual(lhs) / estimate.tolerance(floor, sigmas)


@verification_check("14_mean_value", SUITE, lambda s: 1.0)
def check_mean_value(ctx: SuiteContext) -> CheckResult:
    mc = ctx.settings.monte_carlo
    cfg = ctx.settings.corpus
    rng = ctx.rng("mean-value")
    worst, runs = 0.0, []
    stream_gap = 0.0
    for index, P in enumerate(mc_polynomials(ctx)):
        a = random_point(rng, P.n, cfg.beta_min, cfg.beta_max)
        radii = mc_radii(rng, P.n)
        seed = ctx.seed + index
        for m in range(1, min(mc.max_m, P.n) + 1):
            H = IndexSet.interval(P.n, m)
            K = IndexSet(int(rng.integers(0, 1 << m)), P.n)
            estimates = {}
            for formula in (MeanValueFormula.COMPONENTS, MeanValueFormula.FIRST, MeanValueFormula.SECOND):
                lhs, est = mean_value_check(P, a, radii, m, formula, mc.samples, seed, K=K, workers=mc.workers)
                estimates[formula] = est
                score = normalised(lhs, est, mc.sigmas, mc.floor)
                worst = max(worst, score)
                runs.append({"polynomial": index, "m": m, "formula": formula.value, "score": score,
                             "stderr": est.stderr})
            if m == 1:
                gap = estimates[MeanValueFormula.FIRST].residual(estimates[MeanValueFormula.SECOND].value)
                stream_gap = max(stream_gap, gap)
        # real centre on one variable, arbitrary H = {n}
        H = IndexSet.of(P.n, [P.n])
        coords = list(a.coords)
        coords[-1] = Quaternion(coords[-1].w)
        lhs, est = mean_value_check(P, QPoint(tuple(coords)), radii, 1, MeanValueFormula.REAL_CENTRE,
                                    mc.samples, seed, H=H, workers=mc.workers)
        score = normalised(lhs, est, mc.sigmas, mc.floor)
        worst = max(worst, score)
        runs.append({"polynomial": index, "m": 1, "formula": "H", "score": score, "stderr": est.stderr})
    result = CheckResult.from_residual("14_mean_value", worst, 1.0, samples=mc.samples, runs=runs,
                                       first_second_gap=stream_gap)
    if not stream_gap <= STREAM_AGREEMENT:
        result = result.copy(update={"status": CheckStatus.FAIL.value})
    return result
