"""
CRF operators against spherical derivatives, exactly on the corpus and by finite differences on exp
"""

from ..calculus import DiffOperator, crf_derivative_residual, factorization_residual, fd_directional
from ..poly import to_real_poly_map
from ..quat import Quaternion
from ..slices import QPoint, SliceFunction, slice_eval
from ..stem import IndexSet, make_builtin_stem
from ..types import CheckResult, CheckStatus
from .base import relative, verification_check
from .corpus import SuiteContext, random_polynomial

SUITE = "crf"

LATER_VARIABLE_POLYNOMIALS = 10

EXP_POINTS = (Quaternion(1.0, 1.0), Quaternion(0.5, 0.0, -0.7, 0.4), Quaternion(-0.3, 0.2, 0.9, -0.1))


def _exp_residual() -> float:
    """|dbar e^x + (e^x)'_s| by finite differences at a few points"""
    f = SliceFunction(make_builtin_stem("exp", 1, 1))
    derivative = f.spherical_derivative(IndexSet.of(1, [1]))
    worst = 0.0
    for q in EXP_POINTS:
        x = QPoint((q,))
        expected = -slice_eval(derivative, x)
        value = fd_directional(f, 1, x, DiffOperator.CRF_CONJ)
        worst = max(worst, relative((value - expected).norm(), expected.norm()))
    return worst


@verification_check("08_crf_spherical_derivative", SUITE, lambda s: s.tolerances.exact)
def check_crf_spherical_derivative(ctx: SuiteContext) -> CheckResult:
    tol = ctx.settings.tolerances
    cfg = ctx.settings.corpus
    rng = ctx.rng("crf")
    factorization, relation, pairs = 0.0, 0.0, 0
    for P in ctx.corpus:
        M = to_real_poly_map(P)
        lowest = min(P.variables_used(), default=P.n)
        for h in range(1, P.n + 1):
            factorization = max(factorization, factorization_residual(M, h))
            # the relation needs P free of x_1..x_{h-1}
            if h <= lowest:
                relation = max(relation, crf_derivative_residual(P, h))
                pairs += 1
    for h in range(2, cfg.max_variables + 1):
        for _ in range(LATER_VARIABLE_POLYNOMIALS):
            P = random_polynomial(rng, cfg.max_variables, cfg.max_degree, cfg.max_terms, min_variable=h)
            relation = max(relation, crf_derivative_residual(P, h))
            pairs += 1
    worst = max(factorization, relation)
    numeric = _exp_residual()
    result = CheckResult.from_residual("08_crf_spherical_derivative", worst, tol.exact,
                                       factorization=factorization, spherical_derivative=relation, pairs=pairs,
                                       exp_finite_difference_residual=numeric,
                                       exp_finite_difference_tolerance=tol.finite_difference)
    if not numeric <= tol.finite_difference:
        result = result.copy(update={"status": CheckStatus.FAIL.value})
    return result
