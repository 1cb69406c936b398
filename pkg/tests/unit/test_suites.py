"""Unit tests for the check registry, suite context and suite runner"""

import numpy as np
import pytest

from almansi_core.config import SuiteSettings
from almansi_core.errors import DomainError
from almansi_core.suites import (
    CHECKS, CheckSpec, SUITE_NAMES, SuiteContext, checks_for, random_polynomial, registered_checks,
    run_suite, verification_check,
)
from almansi_core.types import CheckResult


@pytest.fixture
def small_settings():
    return SuiteSettings.parse_obj({
        "seed": 3,
        "corpus": {"size": 4, "max_variables": 2, "max_degree": 3, "max_terms": 2, "points": 3},
    })


class TestRegistry:
    def test_one_check_per_criterion(self):
        names = registered_checks()
        assert len(names) == 15
        assert [name[:2] for name in names] == [f"{i:02d}" for i in range(1, 16)]

    def test_all_suite_is_sorted(self):
        assert [spec.name for spec in checks_for("all")] == registered_checks()
        assert {spec.suite for spec in checks_for("all")} == set(SUITE_NAMES) - {"all"}

    def test_suite_selection(self):
        assert [spec.name for spec in checks_for("poisson")] == ["15_poisson"]
        assert checks_for("unknown") == []

    def test_duplicate_registration(self):
        with pytest.raises(ValueError):
            verification_check("09_fueter", "fueter", lambda s: 1.0)(lambda ctx: None)


class TestSuiteContext:
    def test_generators_depend_on_seed_and_tag(self, small_settings):
        ctx = SuiteContext(small_settings)
        assert ctx.rng("a").integers(1 << 30) == SuiteContext(small_settings).rng("a").integers(1 << 30)
        assert ctx.rng("a").integers(1 << 30) != ctx.rng("b").integers(1 << 30)

    def test_corpus(self, small_settings):
        corpus = SuiteContext(small_settings).corpus
        assert [P.n for P in corpus] == [1, 2, 1, 2]
        assert all(P.total_degree() <= 3 for P in corpus)
        assert corpus == SuiteContext(small_settings).corpus

    def test_random_polynomial_later_variables(self):
        P = random_polynomial(np.random.default_rng(0), 3, 4, 5, min_variable=2)
        assert all(alpha[0] == 0 for alpha in P.terms)


class TestRunSuite:
    def test_unknown_suite(self, small_settings):
        with pytest.raises(DomainError):
            run_suite("everything", small_settings)

    def test_fueter_suite_passes(self, small_settings):
        results = run_suite("fueter", small_settings)
        assert [r.name for r in results] == ["09_fueter"]
        assert results[0].passed, results[0].details

    def test_raising_check_becomes_failure(self, small_settings, monkeypatch):
        def broken(ctx):
            raise DomainError("no such point")

        monkeypatch.setitem(CHECKS, "00_broken", CheckSpec("00_broken", "poisson", lambda s: 0.5, broken))
        monkeypatch.setitem(CHECKS, "15_poisson", CheckSpec(
            "15_poisson", "poisson", lambda s: 1.0, lambda ctx: CheckResult.from_residual("15_poisson", 0.0, 1.0)))
        results = run_suite("poisson", small_settings)
        assert [r.name for r in results] == ["00_broken", "15_poisson"]
        assert not results[0].passed
        assert results[0].residual is None
        assert results[0].tolerance == 0.5
        assert results[0].details["error_type"] == "DomainError"
        assert results[1].passed
