"""Leaf-labelled trees with exact rational edge lengths.

Trees are stored as frozen ``networkx.Graph`` objects whose node ids are strings: a leaf
labelled ``i`` has id ``str(i)``, internal nodes carry any other name. Edge lengths live on
the ``length`` edge attribute as ``Fraction`` values.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Optional

import networkx as nx

from ..arith.rational import RationalLike, as_rational, format_rational
from ..errors import InputError

logger = logging.getLogger(__name__)

Edge = tuple[str, str]


class WeightedTree:
    def __init__(self, graph: nx.Graph, root: Optional[str] = None) -> None:
        if graph.number_of_nodes() == 0:
            raise InputError("a tree needs at least one node")
        if not nx.is_tree(graph):
            raise InputError("graph is not connected and acyclic")
        if root is not None and root not in graph:
            raise InputError(f"root {root!r} is not a node of the tree")
        for u, v, data in graph.edges(data=True):
            length = as_rational(data.get("length", 0))
            if length < 0:
                raise InputError(f"edge ({u}, {v}) has negative length {format_rational(length)}")
            data["length"] = length
        leaves = {}
        for node in graph.nodes:
            if str(node).isdigit():
                label = int(node)
                if graph.degree(node) > 1 or node == root:
                    raise InputError(f"leaf {label} must be a pendant node")
                leaves[label] = node
        if sorted(leaves) != list(range(1, len(leaves) + 1)):
            raise InputError(f"leaf labels must be exactly 1..n, got {sorted(leaves)}")
        for node in graph.nodes:
            if node in leaves.values() or node == root:
                continue
            if graph.degree(node) < 3:
                raise InputError(f"internal node {node!r} has degree {graph.degree(node)}, expected at least 3")
        self.graph = nx.freeze(graph)
        self.root = root
        self._leaves = leaves

    # -- structure ------------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._leaves)

    @property
    def labels(self) -> list[int]:
        return sorted(self._leaves)

    @property
    def is_rooted(self) -> bool:
        return self.root is not None

    def node_of(self, label: int) -> str:
        try:
            return self._leaves[label]
        except KeyError:
            raise InputError(f"unknown leaf label {label}") from None

    def is_leaf(self, node: str) -> bool:
        return str(node).isdigit() and int(node) in self._leaves

    def internal_nodes(self) -> list[str]:
        return [node for node in self.graph.nodes if not self.is_leaf(node)]

    def length(self, u: str, v: str) -> Fraction:
        return self.graph.edges[u, v]["length"]

    def edges(self) -> list[tuple[str, str, Fraction]]:
        return [(u, v, data["length"]) for u, v, data in self.graph.edges(data=True)]

    def zero_length_edges(self) -> list[Edge]:
        return [(u, v) for u, v, length in self.edges() if length == 0]

    def warnings(self) -> list[str]:
        notes = []
        for u, v in self.zero_length_edges():
            kind = "pendant" if self.is_leaf(u) or self.is_leaf(v) else "internal"
            notes.append(f"zero-length {kind} edge ({u}, {v})")
        return notes

    @cached_property
    def _parents(self) -> dict[str, Optional[str]]:
        if self.root is None:
            raise InputError("tree has no root")
        parents: dict[str, Optional[str]] = {self.root: None}
        parents.update(dict(nx.bfs_predecessors(self.graph, self.root)))
        return parents

    def parent(self, node: str) -> Optional[str]:
        return self._parents[node]

    def children(self, node: str) -> list[str]:
        """Children in adjacency insertion order."""
        parent = self._parents[node]
        return [other for other in self.graph.adj[node] if other != parent]

    def preorder_edges(self) -> list[Edge]:
        """``(parent, child)`` pairs, depth first from the root."""
        ordered: list[Edge] = []

        def visit(node: str) -> None:
            for child in self.children(node):
                ordered.append((node, child))
                visit(child)

        visit(self.root if self.root is not None else self._start_node())
        return ordered

    def _start_node(self) -> str:
        internal = self.internal_nodes()
        return internal[0] if internal else self.node_of(1)

    def ancestors(self, node: str) -> list[str]:
        chain = []
        current = self._parents[node]
        while current is not None:
            chain.append(current)
            current = self._parents[current]
        return chain

    def root_path(self, label: int) -> list[Edge]:
        """Edges from the root down to leaf ``label``."""
        node = self.node_of(label)
        chain = [node, *self.ancestors(node)]
        return [(chain[k + 1], chain[k]) for k in reversed(range(len(chain) - 1))]

    def lca(self, first: int, second: int) -> str:
        left = self.node_of(first)
        right = self.node_of(second)
        seen = {left, *self.ancestors(left)}
        for node in [right, *self.ancestors(right)]:
            if node in seen:
                return node
        raise InputError("nodes share no ancestor")

    # -- lengths --------------------------------------------------------------------

    @cached_property
    def _leaf_distances(self) -> dict[int, dict[str, Fraction]]:
        return {
            label: nx.single_source_dijkstra_path_length(self.graph, node, weight="length")
            for label, node in self._leaves.items()
        }

    def leaf_distance(self, i: int, j: int) -> Fraction:
        self.node_of(i)
        return Fraction(self._leaf_distances[i][self.node_of(j)])

    def node_distance(self, u: str, v: str) -> Fraction:
        path = nx.shortest_path(self.graph, u, v)
        return sum((self.length(a, b) for a, b in zip(path, path[1:])), Fraction(0))

    def path(self, u: str, v: str) -> list[str]:
        return nx.shortest_path(self.graph, u, v)

    def total_length(self) -> Fraction:
        return sum((length for _, _, length in self.edges()), Fraction(0))

    def steiner_weight(self, subset: Iterable[int]) -> Fraction:
        """Total length of the edges whose removal separates two leaves of ``subset``."""
        chosen = {self.node_of(label) for label in subset}
        if len(chosen) < 2:
            raise InputError("a Steiner subtree needs at least two leaves")
        start = next(iter(chosen))
        below: dict[str, int] = {}
        weight = Fraction(0)
        parents = dict(nx.dfs_predecessors(self.graph, start))
        for node in nx.dfs_postorder_nodes(self.graph, start):
            below[node] = below.get(node, 0) + (1 if node in chosen else 0)
            parent = parents.get(node)
            if parent is None:
                continue
            below[parent] = below.get(parent, 0) + below[node]
            if 0 < below[node] < len(chosen):
                weight += self.length(parent, node)
        return weight

    def distances(self) -> dict[tuple[int, int], Fraction]:
        return {(i, j): self.leaf_distance(i, j) for i, j in combinations(self.labels, 2)}

    # -- comparison and export ------------------------------------------------------

    def _signature(self) -> tuple:
        edges = frozenset((frozenset((u, v)), length) for u, v, length in self.edges())
        return (self.root, frozenset(self.graph.nodes), edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedTree):
            return NotImplemented
        return type(self) is type(other) and self._signature() == other._signature()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, root={self.root!r})"

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "leaves": {str(label): node for label, node in sorted(self._leaves.items())},
            "edges": [
                {"u": u, "v": v, "length": format_rational(length)}
                for u, v, length in sorted(self.edges(), key=lambda edge: (edge[0], edge[1]))
            ],
        }


class EquidistantTree(WeightedTree):
    """A rooted tree whose leaves all sit at the same distance from the root.

    Heights are distances down to the leaves; an edge's height is the height of its
    top node. Equal heights on both ends of an edge (zero-length edges) are allowed and
    reported by :meth:`warnings`.
    """

    def __init__(self, graph: nx.Graph, root: str, heights: Mapping[str, RationalLike]) -> None:
        super().__init__(graph, root)
        resolved = {node: as_rational(value) for node, value in heights.items()}
        for label in self.labels:
            resolved.setdefault(self.node_of(label), Fraction(0))
        missing = [node for node in self.graph.nodes if node not in resolved]
        if missing:
            raise InputError(f"missing heights for {', '.join(sorted(missing))}")
        for node in self.graph.nodes:
            if self.is_leaf(node) and resolved[node] != 0:
                raise InputError(f"leaf {node} must have height 0")
        for parent, child in self.preorder_edges():
            if resolved[parent] < resolved[child]:
                raise InputError(f"height decreases from {child} up to {parent}")
            if self.length(parent, child) != resolved[parent] - resolved[child]:
                raise InputError(f"edge ({parent}, {child}) length disagrees with the heights")
        self.heights = resolved

    @classmethod
    def from_rooted(cls, tree: WeightedTree) -> "EquidistantTree":
        """Derive heights from a rooted tree, checking that it is equidistant."""
        if not is_equidistant(tree):
            raise InputError("tree is not equidistant")
        depth = nx.single_source_dijkstra_path_length(tree.graph, tree.root, weight="length")
        top = depth[tree.node_of(1)]
        graph = nx.Graph(tree.graph)
        return cls(graph, tree.root, {node: top - value for node, value in depth.items()})

    def height(self, node: str) -> Fraction:
        return self.heights[node]

    @property
    def root_height(self) -> Fraction:
        return self.heights[self.root]

    def edge_height(self, parent: str, child: str) -> Fraction:
        if self.parent(child) != parent:
            raise InputError(f"({parent}, {child}) is not a parent-child edge")
        return self.heights[parent]

    def iter_internal_preorder(self) -> Iterator[str]:
        yield self.root
        for _, child in self.preorder_edges():
            if not self.is_leaf(child):
                yield child

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload["heights"] = {node: format_rational(value) for node, value in sorted(self.heights.items())}
        return payload


def is_equidistant(tree: WeightedTree) -> bool:
    if tree.root is None:
        return False
    depth = nx.single_source_dijkstra_path_length(tree.graph, tree.root, weight="length")
    return len({depth[tree.node_of(label)] for label in tree.labels}) <= 1


def _fresh_name(graph: nx.Graph, base: str) -> str:
    name = base
    suffix = 1
    while name in graph:
        name = f"{base}{suffix}"
        suffix += 1
    return name


def attach_anchor(tree: EquidistantTree, length: RationalLike) -> WeightedTree:
    """Join a new leaf ``n+1`` to the root by an edge of the given length."""
    anchor_length = as_rational(length)
    if anchor_length <= tree.root_height:
        raise InputError(
            f"anchor length {format_rational(anchor_length)} must exceed the root height "
            f"{format_rational(tree.root_height)}"
        )
    graph = nx.Graph(tree.graph)
    graph.add_edge(tree.root, str(tree.n + 1), length=anchor_length)
    return WeightedTree(graph, tree.root)


def anchored_equidistant(tree: EquidistantTree, length: RationalLike) -> EquidistantTree:
    """The anchored tree re-rooted on the anchor edge so that it is equidistant again."""
    anchor_length = as_rational(length)
    anchored = attach_anchor(tree, anchor_length)
    top = (tree.root_height + anchor_length) / 2
    anchor = str(tree.n + 1)
    graph = nx.Graph(anchored.graph)
    new_root = _fresh_name(graph, "root")
    graph.remove_edge(tree.root, anchor)
    graph.add_edge(new_root, tree.root, length=top - tree.root_height)
    graph.add_edge(new_root, anchor, length=top)
    heights = dict(tree.heights)
    heights[new_root] = top
    heights[anchor] = Fraction(0)
    return EquidistantTree(graph, new_root, heights)


def swap_leaves(tree: WeightedTree, first: int, second: int) -> WeightedTree:
    """The same tree with leaf labels ``first`` and ``second`` exchanged."""
    for label in (first, second):
        tree.node_of(label)
    if first == second:
        return tree
    graph = nx.relabel_nodes(tree.graph, {str(first): str(second), str(second): str(first)})
    return WeightedTree(graph, tree.root)


def leaf_distance(tree: WeightedTree, i: int, j: int) -> Fraction:
    return tree.leaf_distance(i, j)


def steiner_weight(tree: WeightedTree, subset: Iterable[int]) -> Fraction:
    return tree.steiner_weight(subset)


def total_length(tree: WeightedTree) -> Fraction:
    return tree.total_length()
