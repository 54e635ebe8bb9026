"""Unordered rooted binary tree shapes (combinatorial types of equidistant trees)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional

import networkx as nx

from ..arith.rational import RationalLike, as_rational, format_rational
from ..errors import InputError
from .weighted import EquidistantTree

logger = logging.getLogger(__name__)

LEAF = "x"


@dataclass(frozen=True)
class TreeShape:
    children: tuple["TreeShape", ...] = ()
    encoding: str = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.children) not in (0, 2):
            raise InputError("shapes are binary: a node has zero or two children")
        ordered = tuple(sorted(self.children, key=lambda child: child.encoding))
        object.__setattr__(self, "children", ordered)
        text = LEAF if not ordered else "(" + ",".join(child.encoding for child in ordered) + ")"
        object.__setattr__(self, "encoding", text)

    @classmethod
    def leaf(cls) -> "TreeShape":
        return cls()

    @classmethod
    def join(cls, left: "TreeShape", right: "TreeShape") -> "TreeShape":
        return cls((left, right))

    @classmethod
    def parse(cls, text: str) -> "TreeShape":
        """Read a canonical or non-canonical encoding such as ``((x,x),x)``."""
        cleaned = "".join(text.split())
        shape, position = _parse_shape(cleaned, 0)
        if position != len(cleaned):
            raise InputError(f"trailing characters in shape {text!r}")
        return shape

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def leaf_count(self) -> int:
        return 1 if self.is_leaf else sum(child.leaf_count for child in self.children)

    def internal_ids(self, prefix: str = "r") -> list[str]:
        """Internal node ids in preorder: ``r``, then ``r0``, ``r00``, ... by child position."""
        if self.is_leaf:
            return []
        ids = [prefix]
        for index, child in enumerate(self.children):
            ids.extend(child.internal_ids(f"{prefix}{index}"))
        return ids

    def __str__(self) -> str:
        return self.encoding


def _parse_shape(text: str, position: int) -> tuple[TreeShape, int]:
    if position >= len(text):
        raise InputError("unexpected end of shape encoding")
    if text[position] == LEAF:
        return TreeShape.leaf(), position + 1
    if text[position] != "(":
        raise InputError(f"unexpected {text[position]!r} at offset {position} of shape encoding")
    left, position = _parse_shape(text, position + 1)
    if position >= len(text) or text[position] != ",":
        raise InputError(f"expected ',' at offset {position} of shape encoding")
    right, position = _parse_shape(text, position + 1)
    if position >= len(text) or text[position] != ")":
        raise InputError(f"expected ')' at offset {position} of shape encoding")
    return TreeShape.join(left, right), position + 1


@lru_cache(maxsize=None)
def _shapes(m: int) -> tuple[TreeShape, ...]:
    if m == 1:
        return (TreeShape.leaf(),)
    found: dict[str, TreeShape] = {}
    for left_size in range(1, m // 2 + 1):
        right_size = m - left_size
        left_shapes = _shapes(left_size)
        right_shapes = _shapes(right_size)
        for i, left in enumerate(left_shapes):
            for j, right in enumerate(right_shapes):
                if left_size == right_size and j < i:
                    continue
                shape = TreeShape.join(left, right)
                found.setdefault(shape.encoding, shape)
    return tuple(found[key] for key in sorted(found))


def enumerate_shapes(m: int) -> list[TreeShape]:
    if m < 1:
        raise InputError("shapes need at least one leaf")
    shapes = list(_shapes(m))
    logger.info("enumerated %d shapes with %d leaves", len(shapes), m)
    return shapes


def realize_shape(
    shape: TreeShape,
    heights: Mapping[str, RationalLike],
    names: Optional[Mapping[str, str]] = None,
) -> EquidistantTree:
    """Place a shape at the given internal-node heights.

    ``heights`` is keyed by :meth:`TreeShape.internal_ids`; leaves are numbered 1..m from
    left to right and ``names`` optionally renames internal nodes.
    """
    if shape.is_leaf:
        raise InputError("a single leaf has no internal nodes to realize")
    names = dict(names or {})
    ids = shape.internal_ids()
    missing = [node for node in ids if node not in heights]
    if missing:
        raise InputError(f"missing heights for {', '.join(missing)}")
    graph = nx.Graph()
    node_heights: dict[str, Fraction] = {}
    counter = iter(range(1, shape.leaf_count + 1))

    def build(current: TreeShape, node_id: str) -> str:
        name = names.get(node_id, node_id)
        node_heights[name] = as_rational(heights[node_id])
        for index, child in enumerate(current.children):
            if child.is_leaf:
                child_name = str(next(counter))
                child_height = Fraction(0)
            else:
                child_name = build(child, f"{node_id}{index}")
                child_height = node_heights[child_name]
            if child_height >= node_heights[name]:
                raise InputError(
                    f"height of {name} ({format_rational(node_heights[name])}) must exceed that of its child "
                    f"{child_name} ({format_rational(child_height)})"
                )
            graph.add_edge(name, child_name, length=node_heights[name] - child_height)
        return name

    root = build(shape, "r")
    return _reorder(graph, root, node_heights)


def _reorder(graph: nx.Graph, root: str, heights: dict[str, Fraction]) -> EquidistantTree:
    """Rebuild the graph so that adjacency order matches preorder from the root."""
    ordered = nx.Graph()
    ordered.add_node(root)

    def visit(node: str, parent: Optional[str]) -> None:
        for child in _children_by_insertion(graph, node, parent):
            ordered.add_edge(node, child, length=graph.edges[node, child]["length"])
        for child in _children_by_insertion(graph, node, parent):
            visit(child, node)

    visit(root, None)
    return EquidistantTree(ordered, root, heights)


def _children_by_insertion(graph: nx.Graph, node: str, parent: Optional[str]) -> list[str]:
    return [other for other in graph.adj[node] if other != parent]


def shape_of(tree: EquidistantTree) -> TreeShape:
    def extract(node: str) -> TreeShape:
        children = tree.children(node)
        if not children:
            return TreeShape.leaf()
        if len(children) != 2:
            raise InputError(f"node {node!r} has {len(children)} children; shapes are binary")
        return TreeShape.join(extract(children[0]), extract(children[1]))

    return extract(tree.root)
