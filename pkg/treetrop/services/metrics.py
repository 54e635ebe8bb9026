"""Dissimilarity matrices, m-dissimilarity vectors and the tree-metric conditions.

Leaves and matrix indices are 1-based throughout.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from ..arith.rational import RationalLike, as_rational, format_rational
from ..errors import ConditionViolation, InputError
from ..models import CheckKind, Violation
from ..trees.weighted import EquidistantTree, WeightedTree
from ..utils.parallel import parallel_map

logger = logging.getLogger(__name__)

Subset = tuple[int, ...]


class DissimilarityMatrix:
    """Symmetric matrix with zero diagonal, indexed by leaves 1..n."""

    __slots__ = ("n", "_rows")

    def __init__(self, rows: Sequence[Sequence[RationalLike]]) -> None:
        grid = [[as_rational(value) for value in row] for row in rows]
        size = len(grid)
        if size == 0:
            raise InputError("a dissimilarity matrix needs at least one row")
        for index, row in enumerate(grid, start=1):
            if len(row) != size:
                raise InputError(f"row {index} has {len(row)} entries, expected {size}")
        for i in range(size):
            if grid[i][i] != 0:
                raise InputError(f"diagonal entry ({i + 1},{i + 1}) is {format_rational(grid[i][i])}, expected 0")
            for j in range(i + 1, size):
                if grid[i][j] != grid[j][i]:
                    raise InputError(f"matrix is not symmetric at ({i + 1},{j + 1})")
        self.n = size
        self._rows = tuple(tuple(row) for row in grid)

    @classmethod
    def from_pairs(cls, n: int, values: Mapping[tuple[int, int], RationalLike]) -> "DissimilarityMatrix":
        rows = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), value in values.items():
            rows[i - 1][j - 1] = rows[j - 1][i - 1] = as_rational(value)
        return cls(rows)

    def __call__(self, i: int, j: int) -> Fraction:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise InputError(f"index ({i},{j}) outside 1..{self.n}")
        return self._rows[i - 1][j - 1]

    def rows(self) -> list[list[Fraction]]:
        return [list(row) for row in self._rows]

    def with_entry(self, i: int, j: int, value: RationalLike) -> "DissimilarityMatrix":
        rows = self.rows()
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = as_rational(value)
        return DissimilarityMatrix(rows)

    def restrict(self, size: int) -> "DissimilarityMatrix":
        """The leading ``size`` x ``size`` block (leaves 1..size)."""
        return DissimilarityMatrix([row[:size] for row in self._rows[:size]])

    def as_vector(self) -> "MVector":
        return MVector(self.n, 2, {(i, j): self(i, j) for i, j in combinations(range(1, self.n + 1), 2)})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DissimilarityMatrix):
            return NotImplemented
        return self._rows == other._rows

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"DissimilarityMatrix(n={self.n})"


class MVector:
    """Values on every m-subset of 1..n."""

    __slots__ = ("n", "m", "_values")

    def __init__(self, n: int, m: int, values: Mapping[Iterable[int], RationalLike]) -> None:
        if not 1 <= m <= n:
            raise InputError(f"subset size {m} out of range for n = {n}")
        cleaned: dict[Subset, Fraction] = {}
        for subset, value in values.items():
            key = tuple(sorted(subset))
            if len(set(key)) != m or key[0] < 1 or key[-1] > n:
                raise InputError(f"{key} is not an {m}-subset of 1..{n}")
            cleaned[key] = as_rational(value)
        if len(cleaned) != comb(n, m):
            raise InputError(f"expected values on all {comb(n, m)} subsets, got {len(cleaned)}")
        self.n = n
        self.m = m
        self._values = dict(sorted(cleaned.items()))

    def __getitem__(self, subset: Iterable[int]) -> Fraction:
        key = tuple(sorted(subset))
        try:
            return self._values[key]
        except KeyError:
            raise InputError(f"{key} is not an {self.m}-subset of 1..{self.n}") from None

    def items(self) -> list[tuple[Subset, Fraction]]:
        return list(self._values.items())

    def subsets(self) -> list[Subset]:
        return list(self._values)

    def with_value(self, subset: Iterable[int], value: RationalLike) -> "MVector":
        values = dict(self._values)
        values[tuple(sorted(subset))] = as_rational(value)
        return MVector(self.n, self.m, values)

    def to_matrix(self) -> DissimilarityMatrix:
        if self.m != 2:
            raise InputError("only pairwise vectors form a matrix")
        return DissimilarityMatrix.from_pairs(self.n, self._values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MVector):
            return NotImplemented
        return (self.n, self.m, self._values) == (other.n, other.m, other._values)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"MVector(n={self.n}, m={self.m})"


def attained_twice(values: Sequence[Fraction]) -> bool:
    top = max(values)
    return sum(1 for value in values if value == top) >= 2


def distance_matrix(tree: WeightedTree) -> DissimilarityMatrix:
    return DissimilarityMatrix.from_pairs(tree.n, tree.distances())


def dissimilarity_of_tree(tree: WeightedTree, m: int) -> MVector:
    if not 2 <= m <= tree.n:
        raise InputError(f"m must satisfy 2 <= m <= {tree.n}, got {m}")
    labels = tree.labels
    return MVector(tree.n, m, {subset: tree.steiner_weight(subset) for subset in combinations(labels, m)})


def _quadruple_violation(D: DissimilarityMatrix, i: int, j: int, k: int, l: int) -> Optional[Violation]:
    sums = [D(i, j) + D(k, l), D(i, k) + D(j, l), D(i, l) + D(j, k)]
    if attained_twice(sums):
        return None
    return Violation(kind=CheckKind.FOUR_POINT, indices=[i, j, k, l], values=sums)


def _scan_distinct(D: DissimilarityMatrix, first: int) -> Optional[Violation]:
    for j, k, l in combinations(range(first + 1, D.n + 1), 3):
        violation = _quadruple_violation(D, first, j, k, l)
        if violation:
            return violation
    return None


def four_point_condition(D: DissimilarityMatrix, workers: Optional[int] = None) -> Optional[Violation]:
    """First quadruple where the largest pairing sum is attained only once, or ``None``.

    Distinct quadruples are scanned first (in lexicographic order), then the ones with
    repeated indices.
    """
    found = parallel_map(lambda first: _scan_distinct(D, first), range(1, D.n + 1), workers)
    for violation in found:
        if violation:
            return violation
    return repeated_quadruple_violation(D)


def repeated_quadruple_violation(D: DissimilarityMatrix) -> Optional[Violation]:
    """First failing quadruple with a repeated index; these reduce to triangle inequalities."""
    for quadruple in combinations_with_replacement(range(1, D.n + 1), 4):
        if len(set(quadruple)) == 4:
            continue
        violation = _quadruple_violation(D, *quadruple)
        if violation:
            return violation
    return None


def ultrametric_violation(D: DissimilarityMatrix, subset: Optional[Iterable[int]] = None) -> Optional[Violation]:
    indices = sorted(subset) if subset is not None else list(range(1, D.n + 1))
    for i, j, k in combinations(indices, 3):
        values = [D(i, j), D(i, k), D(j, k)]
        if not attained_twice(values):
            return Violation(kind=CheckKind.ULTRAMETRIC, indices=[i, j, k], values=values)
    return None


def is_ultrametric(D: DissimilarityMatrix, subset: Optional[Iterable[int]] = None) -> bool:
    return ultrametric_violation(D, subset) is None


def ultrametric_shift(D: DissimilarityMatrix, anchor: Optional[int] = None, E: Optional[RationalLike] = None) -> DissimilarityMatrix:
    """``D'(i,j) = 2E + D(i,j) - D(i,a) - D(j,a)`` for the anchor leaf ``a`` (default ``n``).

    On a tree metric the result restricted to the other leaves is an ultrametric and every
    distance to the anchor equals ``2E``.
    """
    anchor = anchor or D.n
    smallest = max(D(i, anchor) for i in range(1, D.n + 1))
    level = smallest if E is None else as_rational(E)
    if level < smallest:
        raise InputError(f"E = {format_rational(level)} is below max D(i,{anchor}) = {format_rational(smallest)}")
    rows = [
        [
            Fraction(0) if i == j else 2 * level + D(i, j) - D(i, anchor) - D(j, anchor)
            for j in range(1, D.n + 1)
        ]
        for i in range(1, D.n + 1)
    ]
    return DissimilarityMatrix(rows)


def reconstruct_tree(D: DissimilarityMatrix) -> WeightedTree:
    """The tree realizing a tree metric, built by inserting leaves one at a time."""
    violation = four_point_condition(D)
    if violation:
        raise ConditionViolation("matrix is not a tree metric", violation)
    graph = nx.Graph()
    graph.add_node("1")
    if D.n == 1:
        return WeightedTree(graph)
    graph.add_edge("1", "2", length=D(1, 2))
    fresh = (f"n{index}" for index in range(1, 2 * D.n))
    for k in range(3, D.n + 1):
        placed = range(1, k)
        best: Optional[tuple[Fraction, int, int]] = None
        for i, j in combinations(placed, 2):
            pendant = (D(i, k) + D(j, k) - D(i, j)) / 2
            if best is None or pendant < best[0]:
                best = (pendant, i, j)
        pendant, i, j = best
        offset = D(i, k) - pendant
        anchor = _point_on_path(graph, str(i), str(j), offset, fresh)
        graph.add_edge(anchor, str(k), length=pendant)
    tree = WeightedTree(graph)
    for note in tree.warnings():
        logger.warning("reconstructed tree has a %s", note)
    return tree


def _point_on_path(graph: nx.Graph, source: str, target: str, offset: Fraction, fresh) -> str:
    """The node at distance ``offset`` from ``source`` on the path to ``target``, created if needed."""
    path = nx.shortest_path(graph, source, target)
    travelled = Fraction(0)
    for here, there in zip(path, path[1:]):
        length = graph.edges[here, there]["length"]
        if offset == travelled and graph.degree(here) > 1:
            return here
        if offset < travelled + length or (offset == travelled + length and graph.degree(there) == 1):
            middle = next(fresh)
            graph.remove_edge(here, there)
            graph.add_edge(here, middle, length=offset - travelled)
            graph.add_edge(middle, there, length=travelled + length - offset)
            return middle
        travelled += length
    raise InputError(f"offset {format_rational(offset)} lies beyond the path from {source} to {target}")


def equidistant_realization(D: DissimilarityMatrix, size: Optional[int] = None) -> EquidistantTree:
    """Equidistant tree on leaves 1..size realizing an ultrametric by merging at half distances."""
    size = size or D.n
    labels = list(range(1, size + 1))
    violation = ultrametric_violation(D, labels)
    if violation:
        raise ConditionViolation("matrix is not an ultrametric", violation)
    if size < 2:
        raise InputError("an equidistant tree needs at least two leaves")
    clusters: dict[int, tuple[str, Fraction, list[int]]] = {label: (str(label), Fraction(0), [label]) for label in labels}
    graph = nx.Graph()
    heights: dict[str, Fraction] = {}
    counter = 0
    while len(clusters) > 1:
        candidates = []
        for a, b in combinations(sorted(clusters), 2):
            distance = min(D(i, j) for i in clusters[a][2] for j in clusters[b][2])
            candidates.append((distance, a, b))
        distance, a, b = min(candidates)
        counter += 1
        node = f"n{counter}"
        height = distance / 2
        for key in (a, b):
            child, child_height, _ = clusters[key]
            graph.add_edge(node, child, length=height - child_height)
        heights[node] = height
        members = clusters.pop(a)[2] + clusters.pop(b)[2]
        clusters[min(members)] = (node, height, members)
    ((root, _, _),) = clusters.values()
    tree = EquidistantTree(graph, root, heights)
    for note in tree.warnings():
        logger.info("equidistant realization has a %s", note)
    return tree
