"""
Fueter's theorem in several variables, the Laplacian sum formula and axially monogenic components
"""

from ..calculus import axially_monogenic_residual, fueter_residual, laplacian_sum_residual
from ..stem import IndexSet
from ..types import CheckResult
from .base import verification_check
from .corpus import SuiteContext, random_polynomial

SUITE = "fueter"

LATER_VARIABLE_POLYNOMIALS = 10


@verification_check("09_fueter", SUITE, lambda s: s.tolerances.exact)
def check_fueter(ctx: SuiteContext) -> CheckResult:
    cfg = ctx.settings.corpus
    rng = ctx.rng("fueter")
    first = max(fueter_residual(P, 1) for P in ctx.corpus)

    later = 0.0
    for m in range(2, cfg.max_variables + 1):
        for _ in range(LATER_VARIABLE_POLYNOMIALS):
            P = random_polynomial(rng, cfg.max_variables, cfg.max_degree, cfg.max_terms, min_variable=m)
            later = max(later, fueter_residual(P, m))

    sum_formula = max(laplacian_sum_residual(P, m) for P in ctx.corpus for m in range(1, P.n + 1))

    monogenic = 0.0
    for P in ctx.corpus:
        for m in range(1, P.n + 1):
            for K in IndexSet.interval(P.n, m).subsets():
                monogenic = max(monogenic, axially_monogenic_residual(P, m, K))

    worst = max(first, later, sum_formula, monogenic)
    return CheckResult.from_residual(
        "09_fueter", worst, ctx.settings.tolerances.exact,
        first_variable=first, later_variables=later, laplacian_sum=sum_formula, axially_monogenic=monogenic,
    )
