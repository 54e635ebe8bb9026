"""Puiseux witness matrices built from equidistant trees.

Every leaf ``i`` and row family ``j`` gets the series ``x_i^(j) = sum a_j(e) t^(s*h(e))`` over
the edges ``e`` on the path from the root down to ``i``, where ``h(e)`` is the height of the
top node of ``e`` and ``s`` is the exponent scale (2 in the four-row construction, 1 in the
general one). Matrix columns are leaves; maximal minors are indexed by leaf subsets.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional, Sequence

from ..arith.coeffs import NUMERIC, CoefficientDomain, CoeffPoly, symbolic_domain
from ..arith.matrix import PolyMatrix, determinant
from ..arith.puiseux import PuiseuxPoly
from ..arith.rational import RationalLike, as_rational, format_rational
from ..errors import InputError
from ..models import CoefficientMode, Construction
from ..trees.weighted import Edge, EquidistantTree

logger = logging.getLogger(__name__)

AssignmentKey = tuple[int, Edge]


def family_name(family: int, families: int) -> str:
    if families <= 2:
        return "ab"[family - 1]
    return f"a{family}"


def symbol_name(family: int, edge: Edge, families: int) -> str:
    parent, child = edge
    return f"{family_name(family, families)}[{parent},{child}]"


@dataclass(frozen=True)
class CoefficientAssignment:
    """Coefficients ``a_j(e)`` for row families ``j = 1..families`` over the edges of a tree."""

    mode: CoefficientMode
    families: int
    domain: CoefficientDomain
    values: Mapping[AssignmentKey, CoeffPoly]
    seed: Optional[int] = None

    @classmethod
    def numeric(cls, values: Mapping[AssignmentKey, RationalLike], families: int, seed: Optional[int] = None) -> "CoefficientAssignment":
        cleaned = {key: as_rational(value) for key, value in values.items()}
        return cls(CoefficientMode.NUMERIC, families, NUMERIC, cleaned, seed)

    @classmethod
    def symbolic(cls, tree: EquidistantTree, families: int) -> "CoefficientAssignment":
        edges = tree.preorder_edges()
        names = [symbol_name(j, edge, families) for j in range(1, families + 1) for edge in edges]
        domain = symbolic_domain(names)
        values = {
            (j, edge): domain.variable(symbol_name(j, edge, families))
            for j in range(1, families + 1)
            for edge in edges
        }
        return cls(CoefficientMode.SYMBOLIC, families, domain, values)

    @classmethod
    def random(cls, tree: EquidistantTree, families: int, seed: int, bound: int) -> "CoefficientAssignment":
        """Seeded integers in ``[-bound, bound]``, family-major over the preorder edges."""
        rng = random.Random(seed)
        values = {
            (j, edge): Fraction(rng.randint(-bound, bound))
            for j in range(1, families + 1)
            for edge in tree.preorder_edges()
        }
        return cls(CoefficientMode.NUMERIC, families, NUMERIC, values, seed)

    @classmethod
    def from_sequence(cls, tree: EquidistantTree, families: int, numbers: Sequence[RationalLike]) -> "CoefficientAssignment":
        """Fill ``a_1`` over the preorder edges first, then ``a_2`` and so on."""
        edges = tree.preorder_edges()
        if len(numbers) != families * len(edges):
            raise InputError(f"expected {families * len(edges)} numbers, got {len(numbers)}")
        keys = [(j, edge) for j in range(1, families + 1) for edge in edges]
        return cls.numeric(dict(zip(keys, numbers)), families)

    @classmethod
    def zero(cls, tree: EquidistantTree, families: int) -> "CoefficientAssignment":
        return cls.from_sequence(tree, families, [0] * (families * len(tree.preorder_edges())))

    def coefficient(self, family: int, edge: Edge) -> CoeffPoly:
        try:
            return self.values[(family, edge)]
        except KeyError:
            raise InputError(f"no coefficient for family {family} on edge {edge}") from None

    def require(self, tree: EquidistantTree, families: int) -> None:
        if families > self.families:
            raise InputError(f"assignment has {self.families} families, {families} needed")
        missing = [
            (j, edge) for j in range(1, families + 1) for edge in tree.preorder_edges() if (j, edge) not in self.values
        ]
        if missing:
            j, edge = missing[0]
            raise InputError(f"assignment misses family {j} on edge {edge} ({len(missing)} gaps)")

    def labelled(self) -> dict[str, str]:
        return {
            symbol_name(j, edge, self.families): self.domain.format(value)
            for (j, edge), value in self.values.items()
        }


@dataclass(frozen=True)
class WitnessMatrix:
    matrix: PolyMatrix
    construction: Construction
    tree: EquidistantTree
    assignment: CoefficientAssignment
    scale: int
    columns: tuple[int, ...]
    anchor: Optional[int] = None
    substitution: Fraction = Fraction(1)
    column_shifts: Mapping[int, Fraction] = field(default_factory=dict)

    def column_index(self, label: int) -> int:
        try:
            return self.columns.index(label)
        except ValueError:
            raise InputError(f"leaf {label} is not a column of this matrix") from None

    def minor(self, subset: Sequence[int]) -> PolyMatrix:
        if len(subset) != self.matrix.rows:
            raise InputError(f"a maximal minor needs {self.matrix.rows} columns, got {len(subset)}")
        return self.matrix.columns(self.column_index(label) for label in sorted(subset))

    def minor_determinant(self, subset: Sequence[int]) -> PuiseuxPoly:
        return determinant(self.minor(subset))

    def subsets(self) -> list[tuple[int, ...]]:
        return list(combinations(self.columns, self.matrix.rows))

    def with_matrix(self, matrix: PolyMatrix, **changes) -> "WitnessMatrix":
        fields = {
            "matrix": matrix,
            "construction": self.construction,
            "tree": self.tree,
            "assignment": self.assignment,
            "scale": self.scale,
            "columns": self.columns,
            "anchor": self.anchor,
            "substitution": self.substitution,
            "column_shifts": self.column_shifts,
        }
        fields.update(changes)
        return WitnessMatrix(**fields)


def leaf_series(tree: EquidistantTree, leaf: int, family: int, scale: RationalLike, assignment: CoefficientAssignment) -> PuiseuxPoly:
    factor = as_rational(scale)
    if family < 1 or family > assignment.families:
        raise InputError(f"unknown row family {family}")
    terms = [
        PuiseuxPoly.monomial(assignment.coefficient(family, edge), factor * tree.edge_height(*edge), assignment.domain)
        for edge in tree.root_path(leaf)
    ]
    return PuiseuxPoly.total(terms, assignment.domain)


def _general_rows(series: Sequence[PuiseuxPoly], one: PuiseuxPoly) -> list[PuiseuxPoly]:
    """Column entries ``1, x^(1), (x^(1))^2, x^(2), ..., x^(k)`` from the family series."""
    first = series[0]
    return [one, first, first * first, *series[1:]]


def _columns(tree: EquidistantTree, families: int, scale: int, assignment: CoefficientAssignment) -> list[list[PuiseuxPoly]]:
    one = PuiseuxPoly.one(assignment.domain)
    return [
        _general_rows([leaf_series(tree, label, j, scale, assignment) for j in range(1, families + 1)], one)
        for label in tree.labels
    ]


def _transpose(columns: list[list[PuiseuxPoly]]) -> list[list[PuiseuxPoly]]:
    return [list(row) for row in zip(*columns)]


def build_anchored_matrix(tree: EquidistantTree, E: RationalLike, assignment: CoefficientAssignment) -> WitnessMatrix:
    """Four rows ``1, x, x^2, y`` over the leaves of ``tree`` plus an anchor column ``(1, t^2E, t^4E, t^2E)``."""
    level = as_rational(E)
    if level <= tree.root_height:
        raise InputError(f"E = {format_rational(level)} must exceed the root height {format_rational(tree.root_height)}")
    assignment.require(tree, 2)
    columns = _columns(tree, 2, 2, assignment)
    anchor = tree.n + 1
    domain = assignment.domain
    columns.append(
        [
            PuiseuxPoly.one(domain),
            PuiseuxPoly.t_power(2 * level, domain),
            PuiseuxPoly.t_power(4 * level, domain),
            PuiseuxPoly.t_power(2 * level, domain),
        ]
    )
    matrix = PolyMatrix(_transpose(columns), domain)
    return WitnessMatrix(matrix, Construction.ANCHORED, tree, assignment, 2, tuple(range(1, anchor + 1)), anchor=anchor)


def build_general_matrix(tree: EquidistantTree, assignment: CoefficientAssignment, m: int, scale: int = 1) -> WitnessMatrix:
    """``m`` rows ``1, x^(1), (x^(1))^2, x^(2), ..., x^(m-2)`` over every leaf of ``tree``."""
    if not 3 <= m <= tree.n:
        raise InputError(f"m must satisfy 3 <= m <= {tree.n}, got {m}")
    assignment.require(tree, m - 2)
    matrix = PolyMatrix(_transpose(_columns(tree, m - 2, scale, assignment)), assignment.domain)
    return WitnessMatrix(matrix, Construction.GENERAL, tree, assignment, scale, tuple(tree.labels))


def build_square_matrix(tree: EquidistantTree, assignment: CoefficientAssignment, scale: int = 1) -> WitnessMatrix:
    """Square matrix with rows ``1, x^(1), (x^(1))^2, x^(2), ..., x^(m-2)`` over all ``m`` leaves."""
    if tree.n < 3:
        raise InputError("the square construction needs at least three leaves")
    witness = build_general_matrix(tree, assignment, tree.n, scale)
    return witness.with_matrix(witness.matrix, construction=Construction.SQUARE)


def build_extended_matrix(tree: EquidistantTree, anchor_length: RationalLike, assignment: CoefficientAssignment, m: int) -> WitnessMatrix:
    """``m`` general rows over the leaves of ``tree`` plus the anchor leaf at height ``(d'+d'')/2``."""
    far = as_rational(anchor_length)
    if far <= tree.root_height:
        raise InputError(
            f"anchor length {format_rational(far)} must exceed the root height {format_rational(tree.root_height)}"
        )
    n = tree.n + 1
    if not 3 <= m <= n:
        raise InputError(f"m must satisfy 3 <= m <= {n}, got {m}")
    assignment.require(tree, m - 2)
    domain = assignment.domain
    columns = _columns(tree, m - 2, 1, assignment)
    top = PuiseuxPoly.t_power((tree.root_height + far) / 2, domain)
    columns.append(_general_rows([top] * (m - 2), PuiseuxPoly.one(domain)))
    matrix = PolyMatrix(_transpose(columns), domain)
    return WitnessMatrix(matrix, Construction.EXTENDED, tree, assignment, 1, tuple(range(1, n + 1)), anchor=n)


def build_series_only_matrix(tree: EquidistantTree, assignment: CoefficientAssignment, m: int = 3) -> WitnessMatrix:
    """Rows ``x^(1), ..., x^(m)`` only, without the row of ones or the squared row."""
    assignment.require(tree, m)
    rows = [[leaf_series(tree, label, j, 1, assignment) for label in tree.labels] for j in range(1, m + 1)]
    return WitnessMatrix(PolyMatrix(rows, assignment.domain), Construction.SERIES_ONLY, tree, assignment, 1, tuple(tree.labels))


def rescale_columns(witness: WitnessMatrix, exponents: Mapping[int, RationalLike]) -> WitnessMatrix:
    """Multiply the column of each leaf by ``t**exponents[leaf]``."""
    matrix = witness.matrix
    shifts = dict(witness.column_shifts)
    for label, exponent in exponents.items():
        shift = as_rational(exponent)
        if shift == 0:
            continue
        index = witness.column_index(label)
        matrix = matrix.scale_column(index, PuiseuxPoly.t_power(shift, matrix.domain))
        shifts[label] = shifts.get(label, Fraction(0)) + shift
    return witness.with_matrix(matrix, column_shifts=shifts)


def to_valuation_witness(witness: WitnessMatrix, s: RationalLike = Fraction(-1, 2)) -> WitnessMatrix:
    """Substitute ``t -> t**s`` in every entry."""
    factor = as_rational(s)
    matrix = witness.matrix.map_entries(lambda entry: entry.substitute_scale(factor))
    return witness.with_matrix(matrix, substitution=witness.substitution * factor)
