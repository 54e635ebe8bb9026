from __future__ import annotations

import pytest

from treetrop.seeds import random_tree, reference_tree
from treetrop.services.metrics import distance_matrix


@pytest.fixture
def reference():
    return reference_tree()


@pytest.fixture
def reference_newick() -> str:
    return "[&R] (((1:4,2:4)w:3,3:7)v:3,(4:6,5:6)u:4)r;"


@pytest.fixture
def reference_matrix(reference):
    return distance_matrix(reference)


@pytest.fixture
def tree_matrices():
    return [distance_matrix(random_tree(4 + seed % 6, seed)) for seed in range(50)]
