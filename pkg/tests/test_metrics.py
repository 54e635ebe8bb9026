from __future__ import annotations

import pytest

from treetrop.errors import ConditionViolation, InputError
from treetrop.models import CheckKind
from treetrop.seeds import perturb_matrix, random_tree
from treetrop.services.metrics import (
    DissimilarityMatrix,
    MVector,
    dissimilarity_of_tree,
    distance_matrix,
    equidistant_realization,
    four_point_condition,
    is_ultrametric,
    reconstruct_tree,
    ultrametric_shift,
    ultrametric_violation,
)
from treetrop.trees import is_equidistant


def test_matrix_validation():
    with pytest.raises(InputError):
        DissimilarityMatrix([[0, 1], [2, 0]])
    with pytest.raises(InputError):
        DissimilarityMatrix([[1, 1], [1, 0]])
    with pytest.raises(InputError):
        DissimilarityMatrix([[0, 1], [1]])
    with pytest.raises(InputError):
        DissimilarityMatrix([])
    with pytest.raises(InputError):
        DissimilarityMatrix([[0, 1], [1, 0]])(1, 3)


def test_vectors_need_every_subset():
    with pytest.raises(InputError):
        MVector(4, 3, {(1, 2, 3): 1})
    with pytest.raises(InputError):
        MVector(3, 4, {})
    vector = MVector(3, 2, {(2, 1): 1, (1, 3): 2, (3, 2): 3})
    assert vector[(1, 2)] == 1
    assert vector.to_matrix()(2, 3) == 3


def test_reference_matrix_is_a_tree_metric(reference_matrix):
    assert reference_matrix(1, 2) == 8
    assert reference_matrix(1, 4) == 20
    assert four_point_condition(reference_matrix) is None


def test_tree_matrices_pass_four_point(tree_matrices):
    for D in tree_matrices:
        assert four_point_condition(D, workers=2) is None


@pytest.mark.parametrize("seed", range(100))
def test_reconstruction_gives_back_the_metric(seed):
    n = 3 + seed % 10
    D = distance_matrix(random_tree(n, seed))
    tree = reconstruct_tree(D)
    assert tree.n == n
    assert distance_matrix(tree) == D
    assert not tree.warnings()


@pytest.mark.parametrize("seed", range(30))
def test_perturbed_matrices_fail_four_point(seed):
    D = perturb_matrix(distance_matrix(random_tree(4 + seed % 6, seed)), seed)
    violation = four_point_condition(D)
    assert violation is not None
    assert violation.kind is CheckKind.FOUR_POINT
    assert len(set(violation.indices)) == 4
    with pytest.raises(ConditionViolation):
        reconstruct_tree(D)


def test_triangle_failures_show_up_in_repeated_quadruples():
    D = DissimilarityMatrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    violation = four_point_condition(D)
    assert violation.indices == [1, 2, 2, 3]


def test_small_reconstructions():
    assert reconstruct_tree(DissimilarityMatrix([[0]])).n == 1
    assert reconstruct_tree(DissimilarityMatrix([[0, 3], [3, 0]])).leaf_distance(1, 2) == 3


def test_ultrametric_check():
    assert is_ultrametric(DissimilarityMatrix([[0, 2, 4], [2, 0, 4], [4, 4, 0]]))
    violation = ultrametric_violation(DissimilarityMatrix([[0, 2, 4], [2, 0, 6], [4, 6, 0]]))
    assert violation.kind is CheckKind.ULTRAMETRIC
    assert violation.indices == [1, 2, 3]


@pytest.mark.parametrize("seed", range(40))
def test_shift_then_realize(seed):
    n = 4 + seed % 6
    D = distance_matrix(random_tree(n, seed))
    shifted = ultrametric_shift(D)
    E = max(D(i, n) for i in range(1, n + 1))
    assert all(shifted(i, n) == 2 * E for i in range(1, n))
    assert is_ultrametric(shifted, range(1, n))
    tree = equidistant_realization(shifted, n - 1)
    assert is_equidistant(tree)
    assert distance_matrix(tree) == shifted.restrict(n - 1)
    assert tree.root_height <= E


def test_shift_with_a_larger_level(reference_matrix):
    shifted = ultrametric_shift(reference_matrix, E=30)
    assert shifted(1, 5) == 60
    with pytest.raises(InputError):
        ultrametric_shift(reference_matrix, E=1)


def test_realization_flags_zero_length_internal_edges():
    tree = equidistant_realization(DissimilarityMatrix([[0, 2, 2], [2, 0, 2], [2, 2, 0]]))
    assert tree.root_height == 1
    assert any("internal" in note for note in tree.warnings())


def test_realization_rejects_non_ultrametrics():
    with pytest.raises(ConditionViolation):
        equidistant_realization(DissimilarityMatrix([[0, 2, 4], [2, 0, 6], [4, 6, 0]]))
    with pytest.raises(InputError):
        equidistant_realization(DissimilarityMatrix([[0]]))


def test_dissimilarity_of_tree(reference):
    vector = dissimilarity_of_tree(reference, 5)
    assert vector.items() == [((1, 2, 3, 4, 5), 37)]
    assert dissimilarity_of_tree(reference, 4)[(1, 2, 3, 4)] == 31
    assert dissimilarity_of_tree(reference, 2).to_matrix() == distance_matrix(reference)
    with pytest.raises(InputError):
        dissimilarity_of_tree(reference, 6)
