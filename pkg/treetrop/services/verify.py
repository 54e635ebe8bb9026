"""Degree and valuation checks over witness matrices, and the end-to-end pipelines built on them."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ..arith.coeffs import CoeffPoly
from ..arith.matrix import determinant
from ..arith.puiseux import PuiseuxPoly
from ..arith.rational import Infinity, RationalLike, as_rational, format_rational
from ..errors import GenericityExhausted, InputError
from ..models import (
    CoefficientMode,
    Construction,
    FormulaCheckReport,
    LeadingCoefficientType,
    Measure,
    MinorRecord,
    NumericShapeRecord,
    PrimeExampleReport,
    ReportSummary,
    RootComparisonReport,
    ShapeSweepReport,
    SymbolicShapeReport,
    VerificationReport,
)
from ..seeds import ANCHORED_TYPE_LEVEL, dual_heights, first_primes, generic_heights, reference_tree, type_tree
from ..settings import settings
from ..trees.newick import format_newick, tree_digest
from ..trees.shapes import TreeShape, enumerate_shapes, realize_shape
from ..trees.weighted import EquidistantTree, WeightedTree, anchored_equidistant, attach_anchor, swap_leaves
from ..utils.parallel import parallel_map
from .metrics import MVector, dissimilarity_of_tree, distance_matrix, equidistant_realization, ultrametric_shift
from .witness import (
    CoefficientAssignment,
    WitnessMatrix,
    build_anchored_matrix,
    build_extended_matrix,
    build_general_matrix,
    build_series_only_matrix,
    build_square_matrix,
    rescale_columns,
    to_valuation_witness,
)

logger = logging.getLogger(__name__)


def _measured(det: PuiseuxPoly, measure: Measure) -> tuple[Optional[Fraction], CoeffPoly]:
    if det.is_zero:
        return None, det.domain.zero
    if measure is Measure.DEGREE:
        return det.degree(), det.leading_coefficient()
    return -det.valuation(), det.trailing_coefficient()


def _summarize(records: Sequence[MinorRecord], retries: int = 0) -> ReportSummary:
    passed = sum(1 for record in records if record.passed)
    return ReportSummary(
        minors=len(records),
        passed=passed,
        failed=len(records) - passed,
        all_passed=passed == len(records),
        retries=retries,
    )


def verify_minor_degrees(
    witness: WitnessMatrix,
    expected: MVector,
    factor: RationalLike = 1,
    measure: Measure = Measure.DEGREE,
    workers: Optional[int] = None,
) -> VerificationReport:
    """Compare every maximal minor's degree (or negated valuation) with ``factor * expected``."""
    scale = as_rational(factor)
    rows = witness.matrix.rows
    if expected.m != rows or expected.n != len(witness.columns):
        raise InputError(f"expected values must cover the {rows}-subsets of {len(witness.columns)} columns")
    domain = witness.assignment.domain

    def check(subset: tuple[int, ...]) -> MinorRecord:
        computed, coefficient = _measured(witness.minor_determinant(subset), measure)
        target = scale * expected[subset]
        return MinorRecord(
            subset=list(subset),
            expected=target,
            computed=computed,
            measure=measure,
            leading_coeff=domain.format(coefficient),
            leading_coeff_terms=domain.term_count(coefficient),
            passed=computed == target and bool(coefficient),
        )

    records = sorted(parallel_map(check, witness.subsets(), workers), key=lambda record: record.subset)
    return VerificationReport(
        construction=witness.construction,
        tree_digest=tree_digest(witness.tree),
        tree=format_newick(witness.tree),
        seed=witness.assignment.seed,
        mode=witness.assignment.mode,
        factor=scale,
        scale=witness.scale,
        minors=records,
        summary=_summarize(records),
        warnings=witness.tree.warnings(),
    )


def _attempt_seed(seed: int, attempt: int) -> int:
    return seed if attempt == 0 else seed * 1_000_003 + attempt


def certify_tree(
    tree: WeightedTree,
    seed: int,
    retry_budget: Optional[int] = None,
    workers: Optional[int] = None,
) -> VerificationReport:
    """Certify that every 4-leaf subtree weight of ``tree`` is ``-val`` of a minor of one explicit matrix.

    Leaf ``n`` is the anchor unless its pendant edge has length zero, in which case the
    highest-numbered leaf that works takes its place. The returned report holds the
    valuation checks against ``dissimilarity_of_tree(tree, 4)``; draws whose degree check
    fails are retried with a wider coefficient range.
    """
    n = tree.n
    if n < 5:
        raise InputError(f"the pipeline needs at least five leaves, got {n}")
    budget = settings.retry_budget if retry_budget is None else retry_budget
    for anchor in range(n, 0, -1):
        working = swap_leaves(tree, anchor, n)
        D = distance_matrix(working)
        level = max(D(i, n) for i in range(1, n))
        shifted = ultrametric_shift(D, n, level)
        inner = equidistant_realization(shifted, size=n - 1)
        if inner.root_height < level:
            break
        logger.info("leaf %d has a zero-length pendant edge, trying another anchor", anchor)
    else:
        raise InputError("no leaf has a pendant edge of positive length to serve as the anchor")
    logger.info("anchor %d: shifted distances to an ultrametric at E = %s", anchor, format_rational(level))
    anchored = attach_anchor(inner, 2 * level - inner.root_height)
    expected_shifted = dissimilarity_of_tree(anchored, 4)
    target = dissimilarity_of_tree(working, 4)
    relabel = {anchor: n, n: anchor}
    exponents = {i: 2 * (D(i, n) - level) for i in range(1, n)}
    exponents[n] = -2 * level

    for attempt in range(budget + 1):
        bound = settings.coefficient_bound * 10**attempt
        assignment = CoefficientAssignment.random(inner, 2, _attempt_seed(seed, attempt), bound)
        witness = build_anchored_matrix(inner, level, assignment)
        degrees = verify_minor_degrees(witness, expected_shifted, 2, Measure.DEGREE, workers)
        if not degrees.summary.all_passed:
            logger.warning(
                "attempt %d: %d of %d minors lost their leading term, redrawing coefficients",
                attempt + 1,
                degrees.summary.failed,
                degrees.summary.minors,
            )
            continue
        logger.info("degree check passed on attempt %d", attempt + 1)
        final = to_valuation_witness(rescale_columns(witness, exponents))
        report = verify_minor_degrees(final, target, 1, Measure.NEG_VALUATION, workers)
        report.summary.retries = attempt
        minors = [
            record.model_copy(update={"subset": sorted(relabel.get(label, label) for label in record.subset)})
            for record in report.minors
        ]
        return report.model_copy(
            update={
                "minors": sorted(minors, key=lambda record: record.subset),
                "anchor": anchor,
                "tree_digest": tree_digest(tree),
                "tree": format_newick(tree),
                "attempts": attempt + 1,
                "warnings": tree.warnings() + inner.warnings(),
            }
        )
    raise GenericityExhausted(f"no generic coefficient draw in {budget + 1} attempts for seed {seed}", attempts=budget + 1)


def prime_example() -> PrimeExampleReport:
    """Reference 5-leaf tree with the first 24 primes as coefficients, family by family in preorder."""
    tree = reference_tree()
    assignment = CoefficientAssignment.from_sequence(tree, 3, first_primes(3 * len(tree.preorder_edges())))
    det = determinant(build_square_matrix(tree, assignment).matrix)
    total = tree.total_length()
    degree = None if det.is_zero else det.degree()
    leading = det.leading_coefficient()
    logger.info("example determinant has degree %s and leading coefficient %s", degree, leading)
    return PrimeExampleReport(
        tree=format_newick(tree),
        total_length=total,
        degree=degree,
        leading_coefficient=leading,
        assignment=assignment.labelled(),
        passed=degree == total and leading != 0,
    )


# -- leading-coefficient formulas ---------------------------------------------------

FORMULA_ROLES: dict[LeadingCoefficientType, dict[str, tuple[str, str]]] = {
    LeadingCoefficientType.BALANCED: {
        "e_w": ("w", "1"),
        "e'_w": ("w", "2"),
        "e_u": ("u", "3"),
        "e'_u": ("u", "4"),
        "e_v": ("v", "w"),
        "e'_v": ("v", "u"),
    },
    LeadingCoefficientType.CATERPILLAR: {
        "e_u": ("u", "1"),
        "e'_u": ("u", "2"),
        "e_w": ("w", "u"),
        "e'_w": ("w", "3"),
        "e_v": ("v", "w"),
        "e'_v": ("v", "4"),
    },
    LeadingCoefficientType.ANCHORED: {
        "e_u": ("u", "1"),
        "e'_u": ("u", "2"),
        "e_w": ("w", "u"),
        "e'_w": ("w", "3"),
    },
}


def _formula_readings(kind: LeadingCoefficientType, assignment: CoefficientAssignment) -> dict[str, CoeffPoly]:
    """Closed forms of the top coefficient per type.

    The balanced form has two readings. Its middle factor is printed as ``b'(e_u) - b(e_u)``
    and the matrix has no ``b'`` family: ``symmetric`` reads it as ``b(e'_u) - b(e_u)``,
    ``literal`` takes ``b' = b`` so the middle term drops out.
    """
    roles = FORMULA_ROLES[kind]

    def a(role: str) -> CoeffPoly:
        return assignment.coefficient(1, roles[role])

    def b(role: str) -> CoeffPoly:
        return assignment.coefficient(2, roles[role])

    def da(node: str) -> CoeffPoly:
        return a(f"e'_{node}") - a(f"e_{node}")

    def db(node: str) -> CoeffPoly:
        return b(f"e'_{node}") - b(f"e_{node}")

    bracket = db("u") * da("w") - db("w") * da("u")
    if kind is LeadingCoefficientType.ANCHORED:
        return {"closed_form": bracket}
    if kind is LeadingCoefficientType.CATERPILLAR:
        return {"closed_form": da("v") ** 2 * bracket}
    outer = db("w") * da("u") * da("v") ** 2
    last = 2 * db("v") * da("v") * da("w") * da("u")
    return {
        "symmetric": outer + db("u") * da("w") * da("v") ** 2 - last,
        "literal": outer - last,
    }


def leading_coeff_formula_check(kind: LeadingCoefficientType) -> FormulaCheckReport:
    """Symbolic coefficient of ``t^(2 D'(1,2,3,4))`` in the 4x4 determinant against the closed forms."""
    kind = LeadingCoefficientType(kind)
    tree = type_tree(kind)
    assignment = CoefficientAssignment.symbolic(tree, 2)
    if kind is LeadingCoefficientType.ANCHORED:
        witness = build_anchored_matrix(tree, ANCHORED_TYPE_LEVEL, assignment)
        span = attach_anchor(tree, 2 * ANCHORED_TYPE_LEVEL - tree.root_height)
    else:
        witness = build_square_matrix(tree, assignment, scale=2)
        span = tree
    degree = 2 * span.total_length()
    coefficient = witness.minor_determinant((1, 2, 3, 4)).coefficient(degree)
    readings = _formula_readings(kind, assignment)
    matches: dict[str, bool] = {}
    matched, sign = None, None
    for name, formula in readings.items():
        if coefficient and coefficient == formula:
            matches[name], found = True, 1
        elif coefficient and coefficient == -formula:
            matches[name], found = True, -1
        else:
            matches[name], found = False, None
        if found and matched is None:
            matched, sign = name, found
    if matched is None:
        logger.warning("type %s coefficient matches no reading of the closed form", kind.value)
    return FormulaCheckReport(
        type=kind,
        tree=format_newick(witness.tree),
        degree=degree,
        computed_terms=assignment.domain.term_count(coefficient),
        readings=matches,
        matched=matched,
        sign=sign,
    )


# -- square constructions over shapes ------------------------------------------------


def _check_generic(heights: Mapping[str, RationalLike]) -> None:
    values = [as_rational(value) for value in heights.values()]
    if len(set(values)) != len(values) or min(values) <= 0:
        raise InputError("generic heights must be positive and pairwise distinct")


def _symbolic_leading(tree: EquidistantTree) -> tuple[Optional[Fraction], CoeffPoly, CoefficientAssignment]:
    assignment = CoefficientAssignment.symbolic(tree, tree.n - 2)
    det = determinant(build_square_matrix(tree, assignment).matrix)
    if det.is_zero:
        return None, assignment.domain.zero, assignment
    return det.degree(), det.leading_coefficient(), assignment


def shape_symbolic(
    shape: TreeShape,
    heights: Optional[Mapping[str, RationalLike]] = None,
    second_heights: Optional[Mapping[str, RationalLike]] = None,
) -> SymbolicShapeReport:
    """Leading coefficient of the square determinant with symbolic ``a_j(e)`` under two height choices."""
    m = shape.leaf_count
    if m < 3:
        raise InputError("the square construction needs at least three leaves")
    heights = dict(heights or generic_heights(shape))
    second = dict(second_heights or dual_heights(shape))
    _check_generic(heights)
    _check_generic(second)
    tree = realize_shape(shape, heights)
    expected = tree.total_length()
    degree, leading, assignment = _symbolic_leading(tree)
    other_tree = realize_shape(shape, second)
    other_degree, other_leading, _ = _symbolic_leading(other_tree)
    domain = assignment.domain
    agrees = other_degree == other_tree.total_length() and other_leading == leading
    homogeneous = bool(leading) and domain.is_homogeneous(leading, m)
    terms = domain.term_count(leading)
    logger.info("shape %s: %d terms in the leading coefficient", shape.encoding, terms)
    if not agrees:
        logger.warning("shape %s: leading coefficient changes between height assignments", shape.encoding)
    return SymbolicShapeReport(
        shape=shape.encoding,
        m=m,
        heights={node: as_rational(value) for node, value in heights.items()},
        expected_degree=expected,
        degree=degree,
        term_count=terms,
        homogeneous=homogeneous,
        dual_heights={node: as_rational(value) for node, value in second.items()},
        dual_term_count=domain.term_count(other_leading),
        dual_agrees=agrees,
        monomials=domain.monomials(leading),
        passed=degree == expected and homogeneous and agrees,
    )


def shape_numeric(
    shape: TreeShape,
    seed: int,
    samples: int = 5,
    heights: Optional[Mapping[str, RationalLike]] = None,
) -> list[NumericShapeRecord]:
    m = shape.leaf_count
    heights = dict(heights or generic_heights(shape))
    _check_generic(heights)
    tree = realize_shape(shape, heights)
    expected = tree.total_length()
    records = []
    for sample in range(samples):
        draw = seed + sample
        assignment = CoefficientAssignment.random(tree, m - 2, draw, settings.coefficient_bound)
        det = determinant(build_square_matrix(tree, assignment).matrix)
        degree = None if det.is_zero else det.degree()
        record = NumericShapeRecord(
            shape=shape.encoding,
            m=m,
            seed=draw,
            heights={node: as_rational(value) for node, value in heights.items()},
            assignment=assignment.labelled(),
            expected_degree=expected,
            degree=degree,
            leading_coeff=format_rational(det.leading_coefficient()),
            passed=degree == expected and bool(det.leading_coefficient()),
        )
        if not record.passed:
            logger.warning("possible counterexample: shape %s, seed %d, degree %s", shape.encoding, draw, degree)
        records.append(record)
    return records


def shape_sweep(
    m: int,
    symbolic: bool = False,
    seed: Optional[int] = None,
    samples: int = 5,
    workers: Optional[int] = None,
) -> ShapeSweepReport:
    seed = settings.default_seed if seed is None else seed
    shapes = enumerate_shapes(m)
    if symbolic:
        reports = parallel_map(shape_symbolic, shapes, workers)
        return ShapeSweepReport(
            m=m,
            mode=CoefficientMode.SYMBOLIC,
            shape_count=len(shapes),
            symbolic=reports,
            term_counts=sorted((report.term_count for report in reports), reverse=True),
            all_passed=all(report.passed for report in reports),
        )
    batches = parallel_map(lambda shape: shape_numeric(shape, seed, samples), shapes, workers)
    records = [record for batch in batches for record in batch]
    return ShapeSweepReport(
        m=m,
        mode=CoefficientMode.NUMERIC,
        shape_count=len(shapes),
        numeric=records,
        all_passed=all(record.passed for record in records),
    )


# -- anchored construction and the matrix without a row of ones ---------------------


def extended_check(
    tree: EquidistantTree,
    anchor_length: RationalLike,
    m: int,
    seed: int,
    workers: Optional[int] = None,
) -> VerificationReport:
    """Minor degrees of the anchored ``m x n`` matrix against the m-subtree weights of the anchored tree."""
    assignment = CoefficientAssignment.random(tree, m - 2, seed, settings.coefficient_bound)
    witness = build_extended_matrix(tree, anchor_length, assignment, m)
    expected = dissimilarity_of_tree(attach_anchor(tree, anchor_length), m)
    return verify_minor_degrees(witness, expected, 1, Measure.DEGREE, workers)


def extended_agrees(tree: EquidistantTree, anchor_length: RationalLike, seed: int) -> bool:
    """Both constructions certify the full anchored tree with the same determinant degree."""
    n = tree.n + 1
    anchored = extended_check(tree, anchor_length, n, seed)
    rerooted = anchored_equidistant(tree, anchor_length)
    assignment = CoefficientAssignment.random(rerooted, n - 2, seed, settings.coefficient_bound)
    det = determinant(build_square_matrix(rerooted, assignment).matrix)
    (record,) = anchored.minors
    return anchored.summary.all_passed and det.degree() == record.computed == rerooted.total_length()


def root_inclusive_weight(tree: EquidistantTree, subset: Sequence[int]) -> Fraction:
    edges = {edge for label in subset for edge in tree.root_path(label)}
    return sum((tree.length(*edge) for edge in edges), Fraction(0))


def root_path_comparison(tree: EquidistantTree, subset: Sequence[int], seed: int) -> RootComparisonReport:
    """Determinant degree of the matrix without the rows ``1`` and ``x^2`` tracks the subtree through the root."""
    chosen = tuple(sorted(subset))
    m = len(chosen)
    if m < 3:
        raise InputError("the comparison needs at least three leaves")
    steiner = tree.steiner_weight(chosen)
    through_root = root_inclusive_weight(tree, chosen)
    if steiner == through_root:
        raise InputError(f"the subtree spanned by {set(chosen)} contains the root")
    assignment = CoefficientAssignment.random(tree, m, seed, settings.coefficient_bound)
    without_ones = build_series_only_matrix(tree, assignment, m).minor_determinant(chosen)
    with_ones = build_general_matrix(tree, assignment, m).minor_determinant(chosen)

    def top(det: PuiseuxPoly) -> Optional[Fraction]:
        degree = det.degree()
        return None if isinstance(degree, Infinity) else degree

    plain, ones = top(without_ones), top(with_ones)
    return RootComparisonReport(
        tree=format_newick(tree),
        subset=list(chosen),
        steiner_weight=steiner,
        root_inclusive_weight=through_root,
        degree_without_ones_row=plain,
        degree_with_ones_row=ones,
        counterexample=plain == through_root and plain != steiner,
    )
