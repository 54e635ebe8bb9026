from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from treetrop.errors import InputError
from treetrop.models import CheckKind
from treetrop.seeds import perturb_matrix, random_tree
from treetrop.services.metrics import DissimilarityMatrix, dissimilarity_of_tree, distance_matrix, four_point_condition
from treetrop.services.tropical import (
    TropicalPolynomial,
    grassmannian2_membership,
    phi_m,
    phi_m_naive,
    pluecker_3term_scan,
    pluecker_polynomial,
    trop_eval,
)


def test_trop_eval_finds_corners():
    polynomial = TropicalPolynomial([(0, {"x": 1}), (1, {"y": 1}), (-5, {})])
    corner = trop_eval(polynomial, {"x": 1, "y": 0})
    assert corner.value == 1
    assert corner.achievers == {0, 1}
    assert corner.is_corner
    smooth = trop_eval(polynomial, {"x": 3, "y": 0})
    assert smooth.value == 3
    assert not smooth.is_corner


def test_trop_eval_validation():
    with pytest.raises(InputError):
        TropicalPolynomial([])
    with pytest.raises(InputError):
        TropicalPolynomial([(0, {"x": -1})])
    with pytest.raises(InputError):
        trop_eval(TropicalPolynomial([(0, {"x": 1})]), {"y": 1})


def test_pluecker_polynomial_on_a_tree(reference):
    point = {f"p[{i},{j}]": value for (i, j), value in reference.distances().items()}
    assert trop_eval(pluecker_polynomial(1, 2, 3, 4), point).is_corner
    shared = dissimilarity_of_tree(reference, 3)
    point = {"p[" + ",".join(map(str, subset)) + "]": value for subset, value in shared.items()}
    assert trop_eval(pluecker_polynomial(2, 3, 4, 5, common=(1,)), point).is_corner


def test_phi_on_reference(reference_matrix):
    assert phi_m(reference_matrix.as_vector(), 5)[(1, 2, 3, 4, 5)] == 37
    assert phi_m(reference_matrix.as_vector(), 2) == reference_matrix.as_vector()
    with pytest.raises(InputError):
        phi_m(reference_matrix.as_vector(), 6)
    with pytest.raises(InputError):
        phi_m(phi_m(reference_matrix.as_vector(), 3), 4)


def test_phi_on_the_all_two_matrix():
    D = DissimilarityMatrix([[0 if i == j else 2 for j in range(6)] for i in range(6)])
    for m in range(2, 7):
        assert {value for _, value in phi_m(D.as_vector(), m).items()} == {m}
        assert pluecker_3term_scan(phi_m(D.as_vector(), m)) is None


@pytest.mark.parametrize("seed", range(100))
def test_phi_of_a_tree_metric_is_its_subtree_weights(seed):
    tree = random_tree(5 + seed % 6, seed)
    m = 3 + seed % 3
    assert phi_m(distance_matrix(tree).as_vector(), m) == dissimilarity_of_tree(tree, m)


@pytest.mark.parametrize("seed", range(15))
def test_phi_agrees_with_the_naive_sum(seed):
    D = perturb_matrix(distance_matrix(random_tree(6, seed)), seed, bump=seed + 1)
    for m in (3, 4, 5):
        assert phi_m(D.as_vector(), m) == phi_m_naive(D.as_vector(), m)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(0, 10**4),
    st.sampled_from(list(combinations(range(1, 7), 2))),
    st.fractions(min_value=0, max_value=3, max_denominator=4),
    st.sampled_from([3, 4, 5]),
)
def test_phi_grows_by_at_most_half_the_raise(seed, pair, bump, m):
    D = distance_matrix(random_tree(6, seed))
    i, j = pair
    raised = D.with_entry(i, j, D(i, j) + bump)
    low, high = phi_m(D.as_vector(), m), phi_m(raised.as_vector(), m)
    for subset, value in low.items():
        assert value <= high[subset] <= value + bump / 2
        if not {i, j} <= set(subset):
            assert high[subset] == value


def test_grassmannian_matches_four_point(tree_matrices):
    perturbed = [perturb_matrix(D, seed) for seed, D in enumerate(tree_matrices)]
    for D in tree_matrices + perturbed:
        assert grassmannian2_membership(D) == (four_point_condition(D) is None)


def test_grassmannian_rejects_triangle_failures():
    D = DissimilarityMatrix([[0, 4, 4], [4, 0, 10], [4, 10, 0]])
    assert not grassmannian2_membership(D)
    violation = four_point_condition(D)
    assert violation.indices == [1, 1, 2, 3]
    wide = DissimilarityMatrix([[0 if i == j else 4 if 1 in (i, j) else 10 for j in range(1, 6)] for i in range(1, 6)])
    assert not grassmannian2_membership(wide)
    assert four_point_condition(wide) is not None


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 5).flatmap(lambda n: st.lists(st.integers(0, 6), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2)))
def test_grassmannian_agrees_with_four_point_on_small_matrices(entries):
    n = next(size for size in (3, 4, 5) if size * (size - 1) // 2 == len(entries))
    values = dict(zip(combinations(range(1, n + 1), 2), entries))
    D = DissimilarityMatrix([[values.get((min(i, j), max(i, j)), 0) for j in range(1, n + 1)] for i in range(1, n + 1)])
    assert grassmannian2_membership(D) == (four_point_condition(D) is None)


def test_pairwise_scan_reports_the_same_quadruple(tree_matrices):
    for seed, D in enumerate(tree_matrices):
        broken = perturb_matrix(D, seed)
        scanned = pluecker_3term_scan(broken.as_vector(), 2)
        assert scanned.kind is CheckKind.PLUECKER
        assert scanned.indices == four_point_condition(broken).indices
        assert scanned.common == []


@pytest.mark.parametrize("seed", range(50))
def test_tree_vectors_pass_the_three_term_scan(seed):
    tree = random_tree(6 + seed % 3, seed)
    assert pluecker_3term_scan(phi_m(distance_matrix(tree).as_vector(), 4), workers=2) is None
    assert pluecker_3term_scan(dissimilarity_of_tree(tree, 3)) is None


def test_scan_reports_the_common_set():
    tree = random_tree(6, 1)
    vector = dissimilarity_of_tree(tree, 3)
    subsets = list(combinations(range(1, 7), 3))
    bumped = vector.with_value(subsets[0], vector[subsets[0]] + 1000)
    violation = pluecker_3term_scan(bumped)
    assert violation is not None
    assert len(violation.common) == 1
    assert set(subsets[0]) == set(violation.common) | (set(subsets[0]) & set(violation.indices))


def test_scan_checks_m():
    vector = dissimilarity_of_tree(random_tree(5, 0), 3)
    with pytest.raises(InputError):
        pluecker_3term_scan(vector, 4)
