from .newick import format_newick, parse_newick, tree_digest
from .shapes import TreeShape, enumerate_shapes, realize_shape, shape_of
from .weighted import (
    EquidistantTree,
    WeightedTree,
    anchored_equidistant,
    attach_anchor,
    is_equidistant,
    leaf_distance,
    steiner_weight,
    swap_leaves,
    total_length,
)

__all__ = [
    "format_newick",
    "parse_newick",
    "tree_digest",
    "TreeShape",
    "enumerate_shapes",
    "realize_shape",
    "shape_of",
    "EquidistantTree",
    "WeightedTree",
    "anchored_equidistant",
    "attach_anchor",
    "is_equidistant",
    "leaf_distance",
    "steiner_weight",
    "swap_leaves",
    "total_length",
]
