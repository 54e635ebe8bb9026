from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from treetrop.errors import InputError, ParseError
from treetrop.seeds import five_leaf_shapes, generic_heights, load_reference_tree, random_equidistant, random_tree
from treetrop.trees import (
    EquidistantTree,
    TreeShape,
    WeightedTree,
    anchored_equidistant,
    attach_anchor,
    enumerate_shapes,
    format_newick,
    is_equidistant,
    parse_newick,
    realize_shape,
    shape_of,
    swap_leaves,
    tree_digest,
)


def cherry(height=1) -> EquidistantTree:
    return realize_shape(TreeShape.parse("(x,x)"), {"r": height})


def test_leaf_distances_on_reference(reference):
    assert reference.leaf_distance(1, 2) == 8
    assert reference.leaf_distance(1, 4) == 20
    assert reference.leaf_distance(3, 3) == 0
    assert reference.leaf_distance(4, 1) == reference.leaf_distance(1, 4)
    with pytest.raises(InputError):
        reference.leaf_distance(1, 9)


def test_steiner_weights_on_reference(reference):
    assert reference.steiner_weight([1, 2, 3, 4, 5]) == 37
    assert reference.steiner_weight([1, 2, 3, 4]) == 31
    assert reference.steiner_weight([2, 5]) == reference.leaf_distance(2, 5)
    assert reference.total_length() == 37
    with pytest.raises(InputError):
        reference.steiner_weight([3])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**4), st.data())
def test_steiner_weight_grows_with_the_subset(seed, data):
    tree = random_tree(4 + seed % 6, seed)
    larger = data.draw(st.sets(st.sampled_from(range(1, tree.n + 1)), min_size=3))
    smaller = data.draw(st.sets(st.sampled_from(sorted(larger)), min_size=2, max_size=len(larger) - 1))
    assert tree.steiner_weight(smaller) <= tree.steiner_weight(larger)


@pytest.mark.parametrize("seed", range(20))
def test_equidistant_distance_is_twice_the_meeting_height(seed):
    tree = random_equidistant(3 + seed % 6, seed)
    for i, j in combinations(range(1, tree.n + 1), 2):
        assert tree.leaf_distance(i, j) == 2 * tree.height(tree.lca(i, j))


def test_swap_leaves(reference):
    swapped = swap_leaves(reference, 1, 5)
    assert swapped.leaf_distance(5, 2) == reference.leaf_distance(1, 2)
    assert swapped.leaf_distance(1, 4) == reference.leaf_distance(5, 4)
    assert swapped.total_length() == 37
    assert swap_leaves(reference, 3, 3) is reference
    with pytest.raises(InputError):
        swap_leaves(reference, 1, 9)


def test_reference_structure(reference):
    assert reference.root == "r"
    assert reference.preorder_edges() == [
        ("r", "v"), ("v", "w"), ("w", "1"), ("w", "2"), ("v", "3"), ("r", "u"), ("u", "4"), ("u", "5"),
    ]
    assert reference.root_path(4) == [("r", "u"), ("u", "4")]
    assert reference.edge_height("v", "w") == 7
    assert reference.lca(1, 3) == "v"


def test_attach_anchor_distances():
    anchored = attach_anchor(cherry(), 3)
    assert anchored.leaf_distance(1, 3) == 4
    assert anchored.leaf_distance(2, 3) == 4
    with pytest.raises(InputError):
        attach_anchor(cherry(), 1)


def test_reanchoring_keeps_an_equidistant_tree(reference):
    rerooted = anchored_equidistant(reference, 14)
    assert is_equidistant(rerooted)
    assert rerooted.n == 6
    assert rerooted.root_height == 12
    assert rerooted.total_length() == attach_anchor(reference, 14).total_length()


def test_tree_validation():
    graph = nx.Graph()
    graph.add_edge("1", "2", length=-1)
    with pytest.raises(InputError):
        WeightedTree(graph)
    graph = nx.Graph()
    graph.add_edge("a", "1", length=1)
    graph.add_edge("a", "3", length=1)
    with pytest.raises(InputError):
        WeightedTree(graph)


@pytest.mark.parametrize("m, count", [(1, 1), (2, 1), (3, 1), (4, 2), (5, 3), (6, 6), (7, 11), (8, 23), (9, 46), (10, 98)])
def test_shape_counts(m, count):
    shapes = enumerate_shapes(m)
    assert len(shapes) == count
    assert len({shape.encoding for shape in shapes}) == count


def test_shapes_need_a_leaf():
    with pytest.raises(InputError):
        enumerate_shapes(0)


def test_five_leaf_fixture_matches_enumeration():
    assert five_leaf_shapes() == enumerate_shapes(5)
    assert [shape.encoding for shape in five_leaf_shapes()][-1] == "(((x,x),x),(x,x))"


def test_canonical_encoding_ignores_child_order():
    assert TreeShape.parse("(x,((x,x),x))") == TreeShape.parse("(((x,x),x),x)")


@pytest.mark.parametrize("shape", enumerate_shapes(6), ids=str)
def test_realize_and_extract_round_trip(shape):
    tree = realize_shape(shape, generic_heights(shape))
    assert shape_of(tree) == shape
    assert is_equidistant(tree)
    assert tree.n == 6


def test_realize_requires_increasing_heights():
    with pytest.raises(InputError):
        realize_shape(TreeShape.parse("((x,x),x)"), {"r": 2, "r0": 2})
    with pytest.raises(InputError):
        realize_shape(TreeShape.parse("((x,x),x)"), {"r": 2})


def test_random_trees_are_deterministic_and_binary():
    tree = random_tree(9, 3)
    assert tree == random_tree(9, 3)
    assert tree != random_tree(9, 4)
    assert all(tree.graph.degree(node) == 3 for node in tree.internal_nodes())
    assert all(length > 0 for _, _, length in tree.edges())
    with pytest.raises(InputError):
        random_tree(2, 0)


@pytest.mark.parametrize("seed", range(10))
def test_random_equidistant_trees(seed):
    tree = random_equidistant(2 + seed % 7, seed)
    assert is_equidistant(tree)
    assert tree == random_equidistant(2 + seed % 7, seed)


def test_reference_newick_round_trip(reference, reference_newick):
    assert format_newick(reference) == reference_newick
    parsed = parse_newick(reference_newick)
    assert isinstance(parsed, EquidistantTree)
    assert parsed == reference
    assert load_reference_tree() == reference
    assert tree_digest(parsed) == tree_digest(reference)


@pytest.mark.parametrize("seed", range(20))
def test_unrooted_newick_round_trip(seed):
    tree = random_tree(3 + seed % 8, seed)
    text = format_newick(tree)
    assert text.startswith("[&U]")
    assert parse_newick(text) == tree


def test_newick_reads_rational_lengths_and_unnamed_nodes():
    tree = parse_newick("((1:1/2,2:3/4):1,3:2,4:0.25);")
    assert tree.leaf_distance(1, 2) == Fraction(5, 4)
    assert tree.leaf_distance(3, 4) == Fraction(9, 4)
    assert not tree.is_rooted


@pytest.mark.parametrize(
    "text",
    [
        "((1:1,2:1)",
        "((1:1,a:1),3:1);",
        "((1:1,2),3:1);",
        "((1:1,2:1)x:1,(3:1,4:1)x:1);",
        "((1:1,2:1):1,3:1); extra",
        "[&Q] (1:1,2:1);",
    ],
)
def test_newick_errors(text):
    with pytest.raises(ParseError):
        parse_newick(text)


def test_newick_error_location():
    with pytest.raises(ParseError) as caught:
        parse_newick("((1:1,\n2:x),3:1);", source="bad.nwk")
    assert (caught.value.line, caught.value.column) == (2, 3)
    assert str(caught.value).startswith("bad.nwk:2:3")
