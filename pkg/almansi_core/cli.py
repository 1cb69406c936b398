"""
almansi command line: decompose, eval, verify and integrate.

stdout carries the report (JSON by default), logs go to stderr. Exit status is 0 when every check
passes, 1 when a check fails and 2 on usage, input or domain errors.
"""

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, List, Optional

import numpy as np

from . import __version__
from .almansi import ReconstructionMode, almansi_decompose_polynomial, almansi_reconstruct
from .config import load_settings
from .errors import AlmansiError, InputFormatError, create_user_friendly_error_message
from .integral import MeanValueFormula, PoissonFormula, mean_value_check, poisson_check
from .logging import get_logger, setup_logging
from .monitoring import CheckTimer
from .poly import QPolynomial
from .quat import Quaternion, format_quaternion
from .slices import QPoint, slice_eval
from .stem import IndexSet
from .suites import SUITE_NAMES, random_point, run_suite
from .types import CheckResult, Report
from .validation import validate_report_document

logger = get_logger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
DECOMPOSE_POINTS = 5
DECOMPOSE_TOLERANCE = 1e-9

MEAN_VALUE_FORMULAS = {
    "mv1": MeanValueFormula.FIRST,
    "mv2": MeanValueFormula.SECOND,
    "mvK": MeanValueFormula.COMPONENTS,
    "mvH": MeanValueFormula.REAL_CENTRE,
}
POISSON_FORMULAS = {
    "poisson1": PoissonFormula.FIRST,
    "poisson2": PoissonFormula.SECOND,
    "poissonK": PoissonFormula.COMPONENTS,
}


# input helpers

def _load_json_argument(value: str, what: str) -> Any:
    """Inline JSON, or the path of a JSON file"""
    text = value
    path = Path(value)
    if not value.lstrip().startswith(("[", "{")) and path.exists():
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{what} is not valid JSON: {e}", document=what)


def _load_polynomial(path: str) -> QPolynomial:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputFormatError(f"cannot read polynomial file {path}: {e.strerror}", document="polynomial")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"polynomial file {path} is not valid JSON: {e}", document="polynomial")
    return QPolynomial.from_document(document)


def _index_set(text: Optional[str], n: int) -> IndexSet:
    if text is None or not text.strip():
        return IndexSet.empty(n)
    try:
        members = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InputFormatError(f"index list {text!r} must be comma separated integers", document="index set")
    return IndexSet.of(n, members)


def _radii(value: str) -> List[float]:
    document = _load_json_argument(value, "radii")
    if not isinstance(document, list) or not all(isinstance(r, (int, float)) for r in document):
        raise InputFormatError("radii must be a JSON array of numbers", document="radii")
    return [float(r) for r in document]


# commands

def cmd_decompose(args, settings) -> Report:
    P = _load_polynomial(args.input)
    H = _index_set(args.H, P.n)
    dec = almansi_decompose_polynomial(P, H)
    rng = np.random.default_rng(settings.seed)
    cfg = settings.corpus
    points = [random_point(rng, P.n, cfg.beta_min, cfg.beta_max) for _ in range(DECOMPOSE_POINTS)]
    modes = [ReconstructionMode.SLICE] + ([ReconstructionMode.ORDERED] if args.ordered else [])
    checks = []
    for mode in modes:
        worst = 0.0
        for x in points:
            expected = slice_eval(dec.source, x)
            worst = max(worst, (almansi_reconstruct(dec, x, mode) - expected).norm() / max(1.0, expected.norm()))
        name = "reconstruction" if mode == ReconstructionMode.SLICE else "ordered_reconstruction"
        checks.append(CheckResult.from_residual(name, worst, DECOMPOSE_TOLERANCE, points=len(points)))
    result = {"polynomial": P.to_text(), **dec.to_document()}
    return Report(tool_version=__version__, command="decompose", checks=checks, seed=settings.seed, result=result)


def cmd_eval(args, settings) -> Report:
    P = _load_polynomial(args.input)
    x = QPoint.from_document(_load_json_argument(args.point, "qpoint"), P.n)
    value = P.evaluate(x)
    result = {"polynomial": P.to_text(), "point": x.to_document(), "value": value.to_list()}
    return Report(tool_version=__version__, command="eval", checks=[], seed=settings.seed, result=result)


def cmd_verify(args, settings) -> Report:
    checks = run_suite(args.suite, settings)
    return Report(tool_version=__version__, command=f"verify {args.suite}", checks=checks, seed=settings.seed)


def cmd_integrate(args, settings) -> Report:
    P = _load_polynomial(args.input)
    centre = QPoint.from_document(_load_json_argument(args.center, "qpoint"), P.n)
    radii = _radii(args.radii)
    m = args.m if args.m is not None else min(len(radii), P.n)
    samples = settings.monte_carlo.samples
    mc = settings.monte_carlo
    K = _index_set(args.K, P.n) if args.K is not None else None
    if args.formula in MEAN_VALUE_FORMULAS:
        H = _index_set(args.H, P.n) if args.H is not None else None
        lhs, est = mean_value_check(P, centre, radii, m, MEAN_VALUE_FORMULAS[args.formula], samples,
                                    settings.seed, K=K, H=H, workers=mc.workers)
    else:
        if args.x is None:
            raise InputFormatError(f"formula {args.formula} needs --x interior points", document="qpoint")
        x = QPoint.from_document(_load_json_argument(args.x, "qpoint"))
        lhs, est = poisson_check(P, centre, radii, x, m, POISSON_FORMULAS[args.formula], samples,
                                 settings.seed, K=K, workers=mc.workers)
    tolerance = est.tolerance(mc.floor, mc.sigmas)
    check = CheckResult.from_residual(args.formula, est.residual(lhs), tolerance, stderr=est.stderr, samples=samples)
    result = {"lhs": lhs.to_list(), "estimate": est.to_document(), "m": m}
    return Report(tool_version=__version__, command=f"integrate {args.formula}", checks=[check],
                  seed=settings.seed, result=result)


COMMANDS = {
    "decompose": cmd_decompose,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "integrate": cmd_integrate,
}


# output

def render_text(report: Report) -> str:
    lines = [f"almansi {report.tool_version}  {report.command}  seed={report.seed}  {report.elapsed_ms} ms"]
    result = report.result or {}
    if "components" in result:
        lines.append(f"f = {result['polynomial']}   H = {{{','.join(str(h) for h in result['H'])}}}")
        lines.append(f"{'K':<10} {'closed form':<40} expanded")
        for entry in result["components"].values():
            if isinstance(entry, dict):
                label = "{" + ",".join(str(k) for k in entry["K"]) + "}"
                lines.append(f"{label:<10} {entry['closed_form']:<40} {entry['expanded']}")
    elif "value" in result:
        lines.append(f"f = {result['polynomial']}")
        lines.append(f"value = {format_quaternion(Quaternion.from_sequence(result['value']))}")
    elif "estimate" in result:
        est = result["estimate"]
        lines.append(f"lhs      = {format_quaternion(Quaternion.from_sequence(result['lhs']))}")
        lines.append(f"estimate = {format_quaternion(Quaternion.from_sequence(est['value']))}  "
                     f"stderr={est['stderr']:.3g}  samples={est['samples']}")
    if report.checks:
        lines.append(f"{'check':<32} {'status':<6} {'residual':>12} {'tolerance':>12}")
        for check in report.checks:
            residual = "-" if check.residual is None else f"{check.residual:.3e}"
            lines.append(f"{check.name:<32} {check.status:<6} {residual:>12} {check.tolerance:>12.3e}")
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="almansi", description="Almansi decompositions of quaternionic slice functions")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=None, help="random seed (default: $ALMANSI_SEED or 0)")
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--config", default=None, help="suite configuration YAML (default: $ALMANSI_CONFIG)")

    p = sub.add_parser("decompose", help="all components S^H_K of a polynomial")
    p.add_argument("--input", required=True, help="polynomial JSON file")
    p.add_argument("--H", required=True, help="comma separated variable indices")
    p.add_argument("--ordered", action="store_true", help="also check the ordered pointwise reconstruction")
    common(p)

    p = sub.add_parser("eval", help="evaluate a polynomial at a point of H^n")
    p.add_argument("--input", required=True)
    p.add_argument("--point", required=True, help="JSON array of [w,x,y,z] arrays, inline or a file")
    common(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", required=True, choices=SUITE_NAMES)
    p.add_argument("--samples", type=int, default=None, help="Monte Carlo samples per estimate")
    p.add_argument("--tol", type=float, default=None, help="tolerance for every deterministic check")
    common(p)

    p = sub.add_parser("integrate", help="mean-value or Poisson formula by Monte Carlo")
    p.add_argument("--input", required=True)
    p.add_argument("--formula", required=True, choices=sorted(MEAN_VALUE_FORMULAS) + sorted(POISSON_FORMULAS))
    p.add_argument("--center", required=True, help="centre a as a JSON point")
    p.add_argument("--radii", required=True, help="JSON array of radii r_h")
    p.add_argument("--x", default=None, help="Poisson interior points, JSON array of m quaternions")
    p.add_argument("--m", type=int, default=None, help="number of sphere variables")
    p.add_argument("--K", default=None, help="component index set for mvK / poissonK")
    p.add_argument("--H", default=None, help="variable set for mvK / mvH")
    p.add_argument("--samples", type=int, default=None)
    common(p)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    setup_logging(os.getenv("ALMANSI_LOG_LEVEL", "WARNING"))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        settings = load_settings(args.config).with_overrides(
            seed=args.seed, samples=getattr(args, "samples", None), tol=getattr(args, "tol", None))
        with CheckTimer(f"almansi {args.command}") as timer:
            report = COMMANDS[args.command](args, settings)
        report = report.sorted_checks().copy(update={"elapsed_ms": timer.elapsed_ms})
        validate_report_document(json.loads(report.to_json()))
    except AlmansiError as e:
        print(f"almansi: {create_user_friendly_error_message(e)}", file=sys.stderr)
        return EXIT_USAGE

    if args.format == "text":
        print(render_text(report))
    else:
        print(report.to_json())
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
