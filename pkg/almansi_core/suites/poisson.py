"""
Poisson formulas for slice functions and their components, plus the x = 0 reduction to mean values
"""

from ..integral import MeanValueFormula, PoissonFormula, mean_value_check, poisson_check
from ..quat import Quaternion
from ..stem import IndexSet
from ..types import CheckResult, CheckStatus
from .base import verification_check
from .corpus import SuiteContext, random_interior_point, random_point
from .meanvalue import mc_polynomials, mc_radii, normalised

SUITE = "poisson"

REDUCTIONS = (
    (PoissonFormula.FIRST, MeanValueFormula.FIRST),
    (PoissonFormula.SECOND, MeanValueFormula.SECOND),
    (PoissonFormula.COMPONENTS, MeanValueFormula.COMPONENTS),
)


@verification_check("15_poisson", SUITE, lambda s: 1.0)
def check_poisson(ctx: SuiteContext) -> CheckResult:
    mc = ctx.settings.monte_carlo
    cfg = ctx.settings.corpus
    rng = ctx.rng("poisson")
    worst, runs, reduction_failures = 0.0, [], []
    for index, P in enumerate(mc_polynomials(ctx)):
        a = random_point(rng, P.n, cfg.beta_min, cfg.beta_max)
        radii = mc_radii(rng, P.n)
        seed = ctx.seed + index
        for m in range(1, min(mc.max_m, P.n) + 1):
            x = [random_interior_point(rng, mc.poisson_radius) for _ in range(m)]
            K = IndexSet(int(rng.integers(0, 1 << m)), P.n)
            for formula in PoissonFormula:
                lhs, est = poisson_check(P, a, radii, x, m, formula, mc.samples, seed, K=K, workers=mc.workers)
                score = normalised(lhs, est, mc.sigmas, mc.floor)
                worst = max(worst, score)
                runs.append({"polynomial": index, "m": m, "formula": formula.value, "score": score,
                             "stderr": est.stderr})
            # identical sample streams at x = 0 must give identical estimates
            origin = [Quaternion() for _ in range(m)]
            samples = max(1, mc.samples // 10)
            for poisson_formula, mean_formula in REDUCTIONS:
                _, kernel_est = poisson_check(P, a, radii, origin, m, poisson_formula, samples, seed, K=K)
                _, mean_est = mean_value_check(P, a, radii, m, mean_formula, samples, seed, K=K)
                if kernel_est != mean_est:
                    reduction_failures.append(f"polynomial {index}, m={m}, {poisson_formula.value}")
    result = CheckResult.from_residual("15_poisson", worst, 1.0, samples=mc.samples, runs=runs,
                                       reduction_failures=reduction_failures)
    if reduction_failures:
        result = result.copy(update={"status": CheckStatus.FAIL.value})
    return result
