"""Command-line entry point.

Exit codes: 0 pass, 1 mathematical violation or failed verification, 2 input error,
3 no generic coefficient draw within the retry budget.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import ConditionViolation, GenericityExhausted, InputError
from .models import CheckKind, CoefficientMode, LeadingCoefficientType, RunConfig, ViolationReport
from .seeds import random_equidistant, random_tree, reference_tree
from .services import verify
from .services.importer import read_matrix, read_mvector, read_tree, write_tree
from .services.metrics import dissimilarity_of_tree, four_point_condition, ultrametric_violation
from .services.reports import Payload, mvector_payload, render_json
from .services.tropical import phi_m, pluecker_3term_scan
from .settings import settings
from .trees.newick import format_newick
from .trees.weighted import EquidistantTree

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_GENERICITY = 3


def _emit(payload: Payload, output: Optional[str]) -> None:
    text = render_json(payload)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run_config(args: argparse.Namespace, inputs: Sequence[str] = (), **fields) -> RunConfig:
    return RunConfig(
        command=args.command,
        inputs=[str(item) for item in inputs],
        output=args.output,
        seed=args.seed,
        workers=args.workers or settings.workers,
        retry_budget=settings.retry_budget,
        **fields,
    )


def cmd_gen_tree(args: argparse.Namespace) -> int:
    if args.n < 3:
        raise InputError("gen-tree needs n >= 3")
    tree = random_equidistant(args.n, args.seed) if args.equidistant else random_tree(args.n, args.seed)
    logger.info("generated %s", tree)
    if args.output:
        write_tree(tree, args.output)
    else:
        sys.stdout.write(format_newick(tree) + "\n")
    return EXIT_OK


def cmd_phi(args: argparse.Namespace) -> int:
    tree = read_tree(args.tree)
    vector = dissimilarity_of_tree(tree, args.m)
    payload = {"run": _run_config(args, [args.tree], m=args.m, n=tree.n).model_dump(mode="json"), **mvector_payload(vector)}
    _emit(payload, args.output)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    run = _run_config(args, [args.matrix], m=args.pluecker)
    if args.pluecker is not None:
        check, m = CheckKind.PLUECKER, args.pluecker
        if args.matrix.endswith(".json") and _looks_like_vector(args.matrix):
            vector = read_mvector(args.matrix)
        else:
            matrix = read_matrix(args.matrix)
            vector = matrix.as_vector() if m == 2 else phi_m(matrix.as_vector(), m)
        violation = pluecker_3term_scan(vector, m, args.workers)
    elif args.ultrametric:
        check, m = CheckKind.ULTRAMETRIC, None
        violation = ultrametric_violation(read_matrix(args.matrix))
    else:
        check, m = CheckKind.FOUR_POINT, None
        violation = four_point_condition(read_matrix(args.matrix), args.workers)
    report = ViolationReport(check=check, m=m, passed=violation is None, violation=violation, run=run)
    _emit(report, args.output)
    return EXIT_OK if violation is None else EXIT_VIOLATION


def _looks_like_vector(path: str) -> bool:
    return '"values"' in Path(path).read_text(encoding="utf-8-sig")


def cmd_verify(args: argparse.Namespace) -> int:
    if args.anchored:
        tree = read_tree(args.anchored)
        report = verify.certify_tree(tree, args.seed, workers=args.workers)
        run = _run_config(args, [args.anchored], m=4, n=tree.n, scale=2)
        _emit(report.model_copy(update={"run": run}), args.output)
        return EXIT_OK if report.summary.all_passed else EXIT_VIOLATION
    if args.shapes is not None:
        mode = CoefficientMode.SYMBOLIC if args.symbolic else CoefficientMode.NUMERIC
        report = verify.shape_sweep(args.shapes, args.symbolic, args.seed, args.samples, args.workers)
        run = _run_config(args, m=args.shapes, n=args.shapes, mode=mode, scale=1)
        _emit(report.model_copy(update={"run": run}), args.output)
        return EXIT_OK if report.all_passed else EXIT_VIOLATION
    if args.prime_example:
        report = verify.prime_example()
        run = _run_config(args, m=5, n=5, scale=1)
        _emit(report.model_copy(update={"run": run}), args.output)
        return EXIT_OK if report.passed else EXIT_VIOLATION
    if args.root_comparison:
        tree = read_tree(args.tree) if args.tree else reference_tree()
        if not isinstance(tree, EquidistantTree):
            raise InputError("the comparison needs a rooted equidistant tree")
        subset = [int(part) for part in args.subset.split(",")]
        report = verify.root_path_comparison(tree, subset, args.seed)
        run = _run_config(args, [args.tree] if args.tree else [], m=len(subset), n=tree.n, scale=1)
        _emit(report.model_copy(update={"run": run}), args.output)
        return EXIT_OK if report.counterexample else EXIT_VIOLATION
    kinds = list(LeadingCoefficientType) if args.formula == "all" else [LeadingCoefficientType(args.formula)]
    run = _run_config(args, m=4, mode=CoefficientMode.SYMBOLIC)
    reports = [verify.leading_coeff_formula_check(kind).model_copy(update={"run": run}) for kind in kinds]
    _emit(reports, args.output)
    return EXIT_OK if all(report.passed for report in reports) else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.default_seed)
    common.add_argument("--workers", type=int, default=None, help="thread count (default: TREETROP_WORKERS)")
    common.add_argument("--log-level", default=None, help="logging level (default: TREETROP_LOG_LEVEL)")
    common.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(prog=settings.app_name, description="Exact checks for tree dissimilarity vectors.")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen-tree", parents=[common], help="write a seeded random tree")
    gen.add_argument("n", type=int)
    gen.add_argument("--equidistant", action="store_true")
    gen.set_defaults(handler=cmd_gen_tree)

    phi = commands.add_parser("phi", parents=[common], help="m-subtree weights of a tree")
    phi.add_argument("tree")
    phi.add_argument("m", type=int)
    phi.set_defaults(handler=cmd_phi)

    check = commands.add_parser("check", parents=[common], help="four-point, ultrametric or Plücker scan")
    check.add_argument("matrix")
    kind = check.add_mutually_exclusive_group(required=True)
    kind.add_argument("--four-point", action="store_true")
    kind.add_argument("--ultrametric", action="store_true")
    kind.add_argument("--pluecker", type=int, metavar="M")
    check.set_defaults(handler=cmd_check)

    verify_parser = commands.add_parser("verify", parents=[common], help="witness-matrix verification")
    target = verify_parser.add_mutually_exclusive_group(required=True)
    target.add_argument("--anchored", "--thm5", dest="anchored", metavar="TREE")
    target.add_argument("--shapes", "--conj3", dest="shapes", type=int, metavar="M")
    target.add_argument("--prime-example", "--example-m5", dest="prime_example", action="store_true")
    target.add_argument("--root-comparison", "--remark-n", dest="root_comparison", action="store_true")
    target.add_argument("--formula", choices=[kind.value for kind in LeadingCoefficientType] + ["all"])
    verify_parser.add_argument("--symbolic", action="store_true")
    verify_parser.add_argument("--samples", type=int, default=5, help="numeric draws per shape")
    verify_parser.add_argument("--tree", default=None, help="tree for --root-comparison (default: the reference 5-leaf tree)")
    verify_parser.add_argument("--subset", default="1,2,3", help="leaves for --root-comparison")
    verify_parser.set_defaults(handler=cmd_verify)
    return parser


def configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except InputError as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
    except ConditionViolation as exc:
        logger.error("%s", exc)
        _emit({"violation": exc.violation.model_dump(mode="json")}, args.output)
        return EXIT_VIOLATION
    except GenericityExhausted as exc:
        logger.error("%s (after %d attempts)", exc, exc.attempts)
        return EXIT_GENERICITY


if __name__ == "__main__":
    sys.exit(main())
