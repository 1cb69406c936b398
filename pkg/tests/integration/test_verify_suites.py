"""
Verification suites run through the CLI on a reduced corpus.
"""
import json

import pytest

from almansi_core.cli import EXIT_FAILED, EXIT_OK, main
from almansi_core.suites import CHECKS, CheckSpec, registered_checks
from almansi_core.types import CheckResult

SMALL_CONFIG = """\
seed: 1
corpus:
  size: 6
  max_variables: 3
  max_degree: 3
  max_terms: 3
  points: 4
  explicit_points: 20
  slice_preserving: 4
  circular_units: 3
  vanishing_points: 10
  zonal_max_order: 5
monte_carlo:
  samples: 2000
  polynomials: 2
  sigmas: 5.0
"""


@pytest.fixture
def small_config(tmp_path, monkeypatch):
    monkeypatch.delenv("ALMANSI_SEED", raising=False)
    path = tmp_path / "small.yaml"
    path.write_text(SMALL_CONFIG)
    monkeypatch.setenv("ALMANSI_CONFIG", str(path))
    return path


def verify(capsys, suite, *extra):
    code = main(["verify", "--suite", suite, *extra])
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("suite,names", [
    ("reconstruction", ["01_reconstruction", "02_ordered_reconstruction", "03_explicit_stem", "04_closed_form",
                        "05_product_example", "11_circularity", "12_slice_preserving", "13_vanishing"]),
    ("harmonicity", ["06_harmonicity", "07_biharmonicity", "10_zonal"]),
    ("crf", ["08_crf_spherical_derivative"]),
    ("fueter", ["09_fueter"]),
])
def test_deterministic_suites_pass(capsys, small_config, suite, names):
    code, report = verify(capsys, suite)
    failing = [c for c in report["checks"] if c["status"] != "pass"]
    assert code == EXIT_OK, failing
    assert report["command"] == f"verify {suite}"
    assert report["seed"] == 1
    assert [c["name"] for c in report["checks"]] == names


def test_monte_carlo_suites_pass(capsys, small_config):
    for suite in ("meanvalue", "poisson"):
        code, report = verify(capsys, suite)
        assert code == EXIT_OK, report["checks"]
        assert report["checks"][0]["details"]["samples"] == 2000


def test_all_suites_in_order(capsys, small_config):
    code, report = verify(capsys, "all", "--samples", "1000", "--seed", "2")
    assert code == EXIT_OK, [c for c in report["checks"] if c["status"] != "pass"]
    assert [c["name"] for c in report["checks"]] == registered_checks()
    assert report["seed"] == 2


def test_verify_is_reproducible(capsys, small_config):
    _, first = verify(capsys, "harmonicity", "--seed", "7")
    _, second = verify(capsys, "harmonicity", "--seed", "7")
    assert [c["residual"] for c in first["checks"]] == [c["residual"] for c in second["checks"]]


def test_failing_check_sets_exit_status(capsys, small_config, monkeypatch):
    monkeypatch.setitem(CHECKS, "09_fueter", CheckSpec(
        "09_fueter", "fueter", lambda s: 1e-11,
        lambda ctx: CheckResult.from_residual("09_fueter", 1.0, 1e-11)))
    code, report = verify(capsys, "fueter")
    assert code == EXIT_FAILED
    assert report["checks"][0]["status"] == "fail"
