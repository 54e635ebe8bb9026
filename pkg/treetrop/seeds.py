from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import networkx as nx
from sympy import prime

from .arith.rational import RationalLike, as_rational
from .errors import InputError
from .models import LeadingCoefficientType
from .services.metrics import DissimilarityMatrix
from .trees.newick import parse_newick
from .trees.shapes import TreeShape, realize_shape
from .trees.weighted import EquidistantTree, WeightedTree

DATA_DIR = Path(__file__).resolve().parent / "data"

DEFAULT_LENGTHS: tuple[Fraction, ...] = tuple(Fraction(p, q) for q in (1, 2, 3) for p in range(1, 13))

REFERENCE_SHAPE = "(((x,x),x),(x,x))"
REFERENCE_HEIGHTS = {"r": 10, "r0": 7, "r00": 4, "r1": 6}
REFERENCE_NAMES = {"r": "r", "r0": "v", "r00": "w", "r1": "u"}

TYPE_TREES: dict[LeadingCoefficientType, tuple[str, dict[str, int], dict[str, str]]] = {
    LeadingCoefficientType.BALANCED: ("((x,x),(x,x))", {"r": 3, "r0": 1, "r1": 2}, {"r": "v", "r0": "w", "r1": "u"}),
    LeadingCoefficientType.CATERPILLAR: ("(((x,x),x),x)", {"r": 3, "r0": 2, "r00": 1}, {"r": "v", "r0": "w", "r00": "u"}),
    LeadingCoefficientType.ANCHORED: ("((x,x),x)", {"r": 2, "r0": 1}, {"r": "w", "r0": "u"}),
}
ANCHORED_TYPE_LEVEL = Fraction(3)


def random_tree(n: int, seed: int, length_universe: Optional[Sequence[RationalLike]] = None) -> WeightedTree:
    """Unrooted binary tree on leaves 1..n grown by attaching each new leaf to a random edge."""
    if n < 3:
        raise InputError("random trees need at least three leaves")
    universe = [as_rational(value) for value in (length_universe or DEFAULT_LENGTHS)]
    if not universe or min(universe) <= 0:
        raise InputError("the length universe must hold positive rationals")
    rng = random.Random(seed)
    graph = nx.Graph()
    for label in (1, 2, 3):
        graph.add_edge("n1", str(label), length=rng.choice(universe))
    for k in range(4, n + 1):
        edges = sorted(tuple(sorted(edge)) for edge in graph.edges)
        u, v = rng.choice(edges)
        middle = f"n{k - 2}"
        graph.remove_edge(u, v)
        graph.add_edge(u, middle, length=rng.choice(universe))
        graph.add_edge(middle, v, length=rng.choice(universe))
        graph.add_edge(middle, str(k), length=rng.choice(universe))
    return WeightedTree(graph)


def random_equidistant(m: int, seed: int, length_universe: Optional[Sequence[RationalLike]] = None) -> EquidistantTree:
    """Equidistant binary tree built by merging random clusters at strictly increasing heights."""
    if m < 2:
        raise InputError("equidistant trees need at least two leaves")
    universe = [as_rational(value) for value in (length_universe or DEFAULT_LENGTHS)]
    rng = random.Random(seed)
    clusters: list[tuple[str, Fraction]] = [(str(label), Fraction(0)) for label in range(1, m + 1)]
    graph = nx.Graph()
    heights: dict[str, Fraction] = {}
    level = Fraction(0)
    for step in range(1, m):
        first, second = sorted(rng.sample(range(len(clusters)), 2), reverse=True)
        left, right = clusters.pop(first), clusters.pop(second)
        level += rng.choice(universe)
        node = f"n{step}"
        for child, child_height in (right, left):
            graph.add_edge(node, child, length=level - child_height)
        heights[node] = level
        clusters.append((node, level))
    ((root, _),) = clusters
    return EquidistantTree(graph, root, heights)


def perturb_matrix(D: DissimilarityMatrix, seed: int, bump: Optional[RationalLike] = None) -> DissimilarityMatrix:
    """Raise one random off-diagonal entry by ``bump`` (default: the sum of all entries plus one)."""
    if D.n < 2:
        raise InputError("nothing to perturb in a 1x1 matrix")
    rng = random.Random(seed)
    i, j = sorted(rng.sample(range(1, D.n + 1), 2))
    amount = as_rational(bump) if bump is not None else sum((value for row in D.rows() for value in row), Fraction(1))
    return D.with_entry(i, j, D(i, j) + amount)


def _postorder_internal(shape: TreeShape, node_id: str = "r") -> list[str]:
    order = []
    for index, child in enumerate(shape.children):
        if not child.is_leaf:
            order.extend(_postorder_internal(child, f"{node_id}{index}"))
    order.append(node_id)
    return order


def generic_heights(shape: TreeShape, base: int = 100) -> dict[str, Fraction]:
    """Heights ``base**k`` along the internal postorder: increasing towards the root, no small integer relations."""
    return {node: Fraction(base) ** k for k, node in enumerate(_postorder_internal(shape))}


def dual_heights(shape: TreeShape) -> dict[str, Fraction]:
    return generic_heights(shape, base=97)


def first_primes(count: int) -> list[int]:
    return [prime(index) for index in range(1, count + 1)]


def reference_tree() -> EquidistantTree:
    return realize_shape(TreeShape.parse(REFERENCE_SHAPE), REFERENCE_HEIGHTS, REFERENCE_NAMES)


def reference_newick() -> str:
    return (DATA_DIR / "reference5.nwk").read_text(encoding="utf-8")


def load_reference_tree() -> WeightedTree:
    return parse_newick(reference_newick(), source="reference5.nwk")


def five_leaf_shapes() -> list[TreeShape]:
    lines = (DATA_DIR / "shapes5.txt").read_text(encoding="utf-8").splitlines()
    return [TreeShape.parse(line) for line in lines if line.strip() and not line.startswith("#")]


def type_tree(kind: LeadingCoefficientType) -> EquidistantTree:
    """The smallest equidistant tree of a coefficient type, named the way the closed forms name it."""
    shape, heights, names = TYPE_TREES[LeadingCoefficientType(kind)]
    return realize_shape(TreeShape.parse(shape), heights, names)
