from __future__ import annotations

from fractions import Fraction

import pytest

from treetrop.arith import PuiseuxPoly, determinant
from treetrop.errors import InputError
from treetrop.models import Construction
from treetrop.services.metrics import dissimilarity_of_tree
from treetrop.services.verify import verify_minor_degrees
from treetrop.services.witness import (
    CoefficientAssignment,
    build_anchored_matrix,
    build_extended_matrix,
    build_general_matrix,
    build_series_only_matrix,
    build_square_matrix,
    leaf_series,
    rescale_columns,
    symbol_name,
    to_valuation_witness,
)
from treetrop.trees import EquidistantTree, TreeShape, realize_shape, swap_leaves


@pytest.fixture
def cherry():
    return realize_shape(TreeShape.parse("(x,x)"), {"r": 1})


def test_symbol_names():
    assert symbol_name(1, ("r", "v"), 2) == "a[r,v]"
    assert symbol_name(2, ("r", "v"), 2) == "b[r,v]"
    assert symbol_name(3, ("v", "1"), 3) == "a3[v,1]"


def test_leaf_series_on_reference(reference):
    assignment = CoefficientAssignment.symbolic(reference, 3)
    first = leaf_series(reference, 1, 1, 1, assignment)
    assert first.exponents() == [10, 7, 4]
    assert first.leading_coefficient() == assignment.domain.variable("a1[r,v]")
    assert first.trailing_coefficient() == assignment.domain.variable("a1[w,1]")
    assert leaf_series(reference, 4, 2, 1, assignment).exponents() == [10, 6]
    assert leaf_series(reference, 4, 2, 2, assignment).exponents() == [20, 12]
    with pytest.raises(InputError):
        leaf_series(reference, 1, 4, 1, assignment)


def test_assignment_from_sequence(reference):
    assignment = CoefficientAssignment.from_sequence(reference, 2, list(range(1, 17)))
    assert assignment.coefficient(1, ("r", "v")) == 1
    assert assignment.coefficient(2, ("r", "v")) == 9
    assert assignment.labelled()["b[u,5]"] == "16"
    with pytest.raises(InputError):
        CoefficientAssignment.from_sequence(reference, 2, [1, 2, 3])


def test_random_assignments_are_seeded(reference):
    first = CoefficientAssignment.random(reference, 2, 7, 100)
    assert first.values == CoefficientAssignment.random(reference, 2, 7, 100).values
    assert all(abs(value) <= 100 for value in first.values.values())


def test_anchored_columns_on_a_cherry(cherry):
    witness = build_anchored_matrix(cherry, 3, CoefficientAssignment.symbolic(cherry, 2))
    assert witness.construction is Construction.ANCHORED
    assert witness.columns == (1, 2, 3)
    assert witness.anchor == 3
    assert [witness.matrix[row, 0].degree() for row in range(4)] == [0, 2, 4, 2]
    assert [witness.matrix[row, 2].degree() for row in range(4)] == [0, 6, 12, 6]


def test_anchored_level_must_clear_the_root(reference):
    assignment = CoefficientAssignment.random(reference, 2, 0, 10)
    with pytest.raises(InputError):
        build_anchored_matrix(reference, 10, assignment)


def test_coverage_gaps_are_reported(reference):
    assignment = CoefficientAssignment.random(reference, 2, 0, 10)
    values = dict(assignment.values)
    values.pop((2, ("u", "5")))
    with pytest.raises(InputError):
        build_anchored_matrix(reference, 12, CoefficientAssignment.numeric(values, 2))
    with pytest.raises(InputError):
        build_general_matrix(reference, assignment, 5)


def test_three_rows_give_vandermonde_degrees(reference):
    assignment = CoefficientAssignment.random(reference, 1, 11, 10**6)
    witness = build_general_matrix(reference, assignment, 3)
    assert witness.minor_determinant((1, 2, 3)).degree() == 18
    report = verify_minor_degrees(witness, dissimilarity_of_tree(reference, 3))
    assert report.summary.minors == 10
    assert report.summary.all_passed


def test_general_matrix_bounds(reference):
    assignment = CoefficientAssignment.random(reference, 4, 0, 10)
    with pytest.raises(InputError):
        build_general_matrix(reference, assignment, 2)
    with pytest.raises(InputError):
        build_general_matrix(reference, assignment, 6)
    assert build_square_matrix(reference, assignment).matrix.is_square


def test_minor_needs_a_full_column_set(reference):
    witness = build_general_matrix(reference, CoefficientAssignment.random(reference, 1, 0, 10), 3)
    with pytest.raises(InputError):
        witness.minor((1, 2))
    with pytest.raises(InputError):
        witness.minor((1, 2, 9))


def test_anchored_construction_columns(reference):
    assignment = CoefficientAssignment.random(reference, 2, 0, 10)
    witness = build_extended_matrix(reference, 14, assignment, 4)
    assert witness.columns == (1, 2, 3, 4, 5, 6)
    assert [witness.matrix[row, 5].degree() for row in range(4)] == [0, 12, 24, 12]
    with pytest.raises(InputError):
        build_extended_matrix(reference, 9, assignment, 4)


def test_matrix_without_ones_row(reference):
    witness = build_series_only_matrix(reference, CoefficientAssignment.symbolic(reference, 3))
    assert witness.matrix.rows == 3
    assert all(witness.matrix[0, column].degree() == 10 for column in range(5))


def test_rescaling_by_zero_changes_nothing(reference):
    assignment = CoefficientAssignment.symbolic(reference, 1)
    witness = build_general_matrix(reference, assignment, 3)
    assert rescale_columns(witness, {1: 0, 4: 0}).matrix == witness.matrix
    shifted = rescale_columns(witness, {2: Fraction(-3, 2)})
    assert shifted.column_shifts == {2: Fraction(-3, 2)}
    assert shifted.matrix[1, 1] == witness.matrix[1, 1] * PuiseuxPoly.t_power(Fraction(-3, 2), assignment.domain)


def test_substitution_is_reversible(reference):
    witness = build_general_matrix(reference, CoefficientAssignment.symbolic(reference, 1), 3)
    there = to_valuation_witness(witness)
    assert there.substitution == Fraction(-1, 2)
    assert there.matrix[1, 0].valuation() == -5
    back = to_valuation_witness(there, -2)
    assert back.matrix == witness.matrix
    assert back.substitution == 1


def test_minor_degree_ignores_column_order(reference):
    witness = build_square_matrix(reference, CoefficientAssignment.symbolic(reference, 3))
    base = witness.minor_determinant((1, 2, 3, 4, 5))
    for order in [(5, 4, 3, 2, 1), (2, 1, 3, 4, 5), (3, 5, 1, 2, 4)]:
        permuted = determinant(witness.matrix.columns(witness.column_index(label) for label in order))
        assert permuted.degree() == base.degree() == 37
        assert permuted.leading_coefficient() in (base.leading_coefficient(), -base.leading_coefficient())


@pytest.mark.parametrize("first, second", [(1, 4), (2, 5), (3, 5)])
def test_minor_degrees_follow_leaf_relabeling(reference, first, second):
    swapped = EquidistantTree.from_rooted(swap_leaves(reference, first, second))
    relabel = {first: second, second: first}
    original = verify_minor_degrees(
        build_general_matrix(reference, CoefficientAssignment.symbolic(reference, 1), 3),
        dissimilarity_of_tree(reference, 3),
    )
    relabeled = verify_minor_degrees(
        build_general_matrix(swapped, CoefficientAssignment.symbolic(swapped, 1), 3),
        dissimilarity_of_tree(swapped, 3),
    )
    assert relabeled.summary.all_passed
    degrees = {tuple(record.subset): record.computed for record in original.minors}
    for record in relabeled.minors:
        assert record.computed == degrees[tuple(sorted(relabel.get(label, label) for label in record.subset))]
