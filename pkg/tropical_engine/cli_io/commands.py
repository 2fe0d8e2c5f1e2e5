"""
Command dispatch for the tropical-engine command line.

run_command(argv) parses arguments, runs one verb and returns the exit code
together with a Report: 0 on success, 2 when a computed identity or
balancing check fails, 1 on usage, schema or input errors.
"""
import argparse
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

from tropical_engine.affine import AffineStructure
from tropical_engine.cli_io.report import render
from tropical_engine.cli_io.schemas import Report
from tropical_engine.cli_io.serialize import (
    cycle_to_dict,
    load,
    plfn_to_dict,
    rational_str,
    save,
)
from tropical_engine.complex_core import ConeComplex
from tropical_engine.cycles import (
    TropicalCycle,
    certify,
    degree_at,
    fundamental_class,
    intersect,
    is_balanced,
    pushforward,
)
from tropical_engine.errors import (
    NotCertified,
    NotCombinatoriallyPrincipal,
    TropicalError,
    UnbalancedFundamentalClass,
    UsageError,
)
from tropical_engine.moduli import build_m0n, cross_ratio_structure, multinomial_oracle, psi_representative

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_IDENTITY = 2
MATH_FAILURES = (NotCombinatoriallyPrincipal, NotCertified, UnbalancedFundamentalClass)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--report', choices=['json', 'text'], default='text',
                        help='Report format (default: text)')
    common.add_argument('--output', help='Also write the rendered report to this file')

    parser = _Parser(
        prog="tropical-engine",
        description="Exact tropical intersection computations on cone complexes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  tropical-engine m0n --n 5 --emit m05.json           # Write the moduli fan for five marks
  tropical-engine m0n --n 5 --psi 1 --psi 2 --degree  # Degree of psi_1 psi_2
  tropical-engine check-balanced --complex m04.json --cycle c.json --affine a.json
  tropical-engine case-study genus1 --report json     # Run the genus-one case study

Environment Variables:
  TROPICAL_ENGINE_WORKERS    Worker threads for balancing sweeps (default: 1)

Exit codes: 0 success, 2 failed identity or balancing check, 1 usage or input error.
        """
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    m0n = sub.add_parser('m0n', parents=[common], help='Moduli fan of rational marked curves')
    m0n.add_argument('--n', type=int, required=True, help='Number of marks (4..8)')
    m0n.add_argument('--emit', help='Write the complex as complex.v1 JSON')
    m0n.add_argument('--psi', type=int, action='append', default=[], help='Cap with psi_i; repeatable')
    m0n.add_argument('--cap', choices=['fundamental'], default='fundamental', help='Cycle to cap (default: fundamental)')
    m0n.add_argument('--degree', action='store_true', help='Report the degree of the resulting 0-cycle')

    bal = sub.add_parser('check-balanced', parents=[common], help='Check balancing of a cycle')
    bal.add_argument('--complex', required=True)
    bal.add_argument('--cycle', required=True)
    bal.add_argument('--affine', help='affine.v1 file (default: constants only)')

    inter = sub.add_parser('intersect', parents=[common], help='Intersect a cycle with a function')
    inter.add_argument('--complex', required=True)
    inter.add_argument('--affine', required=True)
    inter.add_argument('--function', required=True)
    inter.add_argument('--cycle', required=True)
    inter.add_argument('--emit', help='Write the resulting cycle')

    push = sub.add_parser('pushforward', parents=[common], help='Push a cycle forward')
    push.add_argument('--source', required=True)
    push.add_argument('--target', required=True)
    push.add_argument('--morphism', required=True)
    push.add_argument('--cycle', required=True)
    push.add_argument('--source-affine', help='affine.v1 file on the source (default: constants only)')
    push.add_argument('--target-affine', help='affine.v1 file on the target (default: constants only)')
    push.add_argument('--emit', help='Write the resulting cycle')

    deg = sub.add_parser('degree', parents=[common], help='Local degree over a sample point')
    deg.add_argument('--source', required=True)
    deg.add_argument('--target', required=True)
    deg.add_argument('--morphism', required=True)
    deg.add_argument('--cycle', required=True)
    deg.add_argument('--source-affine', help='affine.v1 file on the source (default: constants only)')
    deg.add_argument('--target-affine', help='affine.v1 file on the target (default: constants only)')
    deg.add_argument('--cone', required=True, help='Target cone id')
    deg.add_argument('--point', required=True, help='Comma separated rational coordinates')
    deg.add_argument('--fold', action='append', default=[], help='Fold as ray:ray; repeatable')

    study = sub.add_parser('case-study', parents=[common], help='Run a bundled case study')
    study.add_argument('study', choices=['genus1'])
    study.add_argument('--samples', type=int, help='Samples per region')
    study.add_argument('--seed', type=int, help='Sampling seed')
    return parser


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}")


def _cmd_m0n(args) -> Tuple[int, Dict[str, Any], Dict[str, str]]:
    complex_ = build_m0n(args.n)
    results: Dict[str, Any] = {
        "n": args.n,
        "rays": len(complex_.rays),
        "cones_by_dim": [len(complex_.cones_of_dim(k)) for k in range(complex_.dim + 1)],
    }
    provenance: Dict[str, str] = {}
    if args.emit:
        results["emitted"] = str(save(complex_, args.emit))
    code = EXIT_OK
    if args.psi:
        A = cross_ratio_structure(args.n)
        cycle = fundamental_class(complex_)
        for i in args.psi:
            cycle = intersect(A, psi_representative(args.n, i), cycle)
        results["psi"] = args.psi
        results["cycle"] = cycle_to_dict(cycle)
        if args.degree:
            if cycle.k != 0:
                raise UsageError(f"--degree needs {args.n - 3} psi factors, got {len(args.psi)}")
            exponents = [args.psi.count(i) for i in range(1, args.n + 1)]
            degree = cycle.total()
            oracle = multinomial_oracle(args.n, exponents)
            results["degree"] = rational_str(degree)
            results["expected_degree"] = rational_str(oracle)
            provenance["expected_degree"] = "derived"
            code = EXIT_OK if degree == oracle else EXIT_IDENTITY
    elif args.degree:
        raise UsageError("--degree requires at least one --psi")
    return code, results, provenance


def _load_affine(path: Optional[str], complex_: ConeComplex) -> AffineStructure:
    return load(path, "affine", complex=complex_) if path else AffineStructure.constants_only(complex_)


def _cmd_check_balanced(args):
    complex_ = load(args.complex, "complex")
    cycle = load(args.cycle, "cycle", complex=complex_)
    A = _load_affine(args.affine, complex_)
    report = is_balanced(cycle, A)
    results: Dict[str, Any] = {"balanced": report.balanced}
    if not report.balanced:
        results["failing_cone"] = report.failing_cone
        results["witness"] = plfn_to_dict(report.witness)
    return (EXIT_OK if report.balanced else EXIT_IDENTITY), results, {}


def _cmd_intersect(args):
    complex_ = load(args.complex, "complex")
    A = load(args.affine, "affine", complex=complex_)
    phi = load(args.function, "plfn", complex=complex_)
    cycle = load(args.cycle, "cycle", complex=complex_)
    product = intersect(A, phi, cycle)
    balanced = is_balanced(product, A).balanced
    results = {"cycle": cycle_to_dict(product), "balanced": balanced}
    if args.emit:
        results["emitted"] = str(save(product, args.emit))
    return (EXIT_OK if balanced else EXIT_IDENTITY), results, {}


def _load_morphism(args):
    source = load(args.source, "complex")
    target = load(args.target, "complex")
    morphism = load(args.morphism, "morphism", source=source, target=target)
    morphism = certify(morphism, _load_affine(args.source_affine, source), _load_affine(args.target_affine, target))
    cycle = load(args.cycle, "cycle", complex=source)
    return morphism, cycle


def _cmd_pushforward(args):
    morphism, cycle = _load_morphism(args)
    pushed: TropicalCycle = pushforward(morphism, cycle)
    results = {"cycle": cycle_to_dict(pushed)}
    if args.emit:
        results["emitted"] = str(save(pushed, args.emit))
    return EXIT_OK, results, {}


def _cmd_degree(args):
    morphism, cycle = _load_morphism(args)
    point = [_parse_rational(x) for x in args.point.split(",")]
    fold = {}
    for item in args.fold:
        first, _, second = item.partition(":")
        if not second:
            raise UsageError(f"--fold expects ray:ray, got {item!r}")
        fold[first], fold[second] = second, first
    degree = degree_at(morphism, cycle, args.cone, point, fold or None)
    return EXIT_OK, {"degree": rational_str(degree)}, {}


def _cmd_case_study(args):
    from tropical_engine.genus_one.case_study import run_case_study

    results = run_case_study(samples=args.samples, seed=args.seed)
    provenance = {check["name"]: check["provenance"] for check in results["checks"]}
    return (EXIT_OK if results["passed"] else EXIT_IDENTITY), results, provenance


COMMANDS: Dict[str, Callable] = {
    "m0n": _cmd_m0n,
    "check-balanced": _cmd_check_balanced,
    "intersect": _cmd_intersect,
    "pushforward": _cmd_pushforward,
    "degree": _cmd_degree,
    "case-study": _cmd_case_study,
}


def _run(argv: Optional[Sequence[str]]) -> Tuple[Report, str]:
    parser = build_parser()
    command = " ".join(argv or [])
    fmt, output = "text", None
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
        fmt, output = getattr(args, "report", "text"), getattr(args, "output", None)
        if not args.command:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        code, results, provenance = COMMANDS[args.command](args)
        status = "ok" if code == EXIT_OK else "failed"
        report = Report(command=command, status=status, exit_code=code, results=results, provenance=provenance)
    except SystemExit as e:
        # --help
        code = int(e.code or 0)
        report = Report(command=command, status="ok" if code == 0 else "failed", exit_code=code)
    except MATH_FAILURES as e:
        logger.error(f"{type(e).__name__}: {e}")
        report = Report(command=command, status="failed", exit_code=EXIT_IDENTITY,
                        results={"error": type(e).__name__}, notes=[str(e)])
    except (TropicalError, FileNotFoundError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        results: Dict[str, Any] = {"error": type(e).__name__}
        diagnostics = getattr(e, "diagnostics", None)
        if diagnostics:
            results["diagnostics"] = [{"path": p, "message": m} for p, m in diagnostics]
        report = Report(command=command, status="failed", exit_code=EXIT_INPUT, results=results, notes=[str(e)])
    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        Path(output).write_text(render(report, fmt), encoding="utf-8")
    return report, fmt


def run_command(argv: Optional[Sequence[str]] = None) -> Tuple[int, Report]:
    """Run one command line and return (exit code, report). Never exits the process."""
    report, _ = _run(argv)
    return report.exit_code, report


def run_and_render(argv: Optional[Sequence[str]] = None) -> Tuple[int, str]:
    """Run one command line and render its report in the requested format."""
    report, fmt = _run(argv)
    return report.exit_code, render(report, fmt)
