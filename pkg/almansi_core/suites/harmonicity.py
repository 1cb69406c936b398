"""
Harmonicity of components, separate biharmonicity and the zonal polynomials
"""

from ..almansi import almansi_component
from ..calculus import biharmonic_residual, laplacian
from ..poly import QPolynomial, poly_product_stem, poly_slice_function, to_real_poly_map, zonal_tilde, zonal_tilde_poly
from ..stem import all_subsets
from ..types import CheckResult
from .base import relative, verification_check
from .corpus import SuiteContext, random_point

SUITE = "harmonicity"

ZONAL_EXPECTED = {
    2: {(2, 0): 3.0, (0, 2): -1.0},
    3: {(3, 0): 4.0, (1, 2): -4.0},
}


@verification_check("06_harmonicity", SUITE, lambda s: s.tolerances.exact)
def check_harmonicity(ctx: SuiteContext) -> CheckResult:
    worst, maps = 0.0, 0
    for P in ctx.corpus:
        f = poly_slice_function(P)
        for H in all_subsets(P.n):
            if not H.bits:
                continue
            for K in H.subsets():
                M = to_real_poly_map(almansi_component(f, H, K))
                worst = max(worst, max(laplacian(M, h).max_coeff() for h in H.members))
                maps += 1
    return CheckResult.from_residual("06_harmonicity", worst, ctx.settings.tolerances.exact, components=maps)


@verification_check("07_biharmonicity", SUITE, lambda s: s.tolerances.exact)
def check_biharmonicity(ctx: SuiteContext) -> CheckResult:
    worst = max(biharmonic_residual(P, m) for P in ctx.corpus for m in range(1, P.n + 1))
    return CheckResult.from_residual("07_biharmonicity", worst, ctx.settings.tolerances.exact,
                                     polynomials=len(ctx.corpus))


@verification_check("10_zonal", SUITE, lambda s: s.tolerances.zonal)
def check_zonal(ctx: SuiteContext) -> CheckResult:
    cfg = ctx.settings.corpus
    rng = ctx.rng("zonal")
    points = [random_point(rng, 1, cfg.beta_min, cfg.beta_max) for _ in range(cfg.points)]
    value_residual, laplacian_residual = 0.0, 0.0
    for k in range(cfg.zonal_max_order + 1):
        derivative = poly_product_stem(QPolynomial.variable(1, 1, k + 1)).spherical_derivative([1])
        expected_map = to_real_poly_map(derivative)
        laplacian_residual = max(laplacian_residual, laplacian(expected_map, 1).max_coeff())
        for x in points:
            value = expected_map.evaluate(x)
            exact = zonal_tilde(k, x.coords[0])
            value_residual = max(value_residual, relative(abs(value.w - exact) + value.imag_norm(), abs(exact)))
    literal = 0.0
    for k, coeffs in ZONAL_EXPECTED.items():
        actual = zonal_tilde_poly(k)
        for key in set(actual) | set(coeffs):
            literal = max(literal, abs(actual.get(key, 0.0) - coeffs.get(key, 0.0)))
    worst = max(value_residual, laplacian_residual, literal)
    return CheckResult.from_residual("10_zonal", worst, ctx.settings.tolerances.zonal,
                                     max_order=cfg.zonal_max_order, laplacian_residual=laplacian_residual)
