"""Max-plus tropical polynomials, the cyclic map phi^(m) and tropical Plücker scans.

Coordinates enter the Plücker checks with a positive sign: an m-dissimilarity value is the
negated valuation of the corresponding maximal minor, which is the max-plus convention.
The three-term scan is a necessary condition for membership in the tropical Grassmannian
when m >= 3, never a sufficient one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Mapping, Optional, Sequence

from ..arith.rational import RationalLike, as_rational
from ..errors import InputError
from ..models import CheckKind, Violation
from ..utils.parallel import parallel_map
from .metrics import DissimilarityMatrix, MVector, attained_twice, repeated_quadruple_violation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TropicalTerm:
    constant: Fraction
    exponents: tuple[tuple[str, int], ...]


class TropicalPolynomial:
    """``max_i (a_i + <i, x>)`` over named coordinates."""

    def __init__(self, terms: Sequence[tuple[RationalLike, Mapping[str, int]]]) -> None:
        if not terms:
            raise InputError("a tropical polynomial needs at least one term")
        built = []
        for constant, exponents in terms:
            for name, power in exponents.items():
                if not isinstance(power, int) or power < 0:
                    raise InputError(f"exponent of {name} must be a non-negative integer")
            cleaned = tuple(sorted((name, power) for name, power in exponents.items() if power))
            built.append(TropicalTerm(as_rational(constant), cleaned))
        self.terms: tuple[TropicalTerm, ...] = tuple(built)

    @property
    def variables(self) -> set[str]:
        return {name for term in self.terms for name, _ in term.exponents}

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class CornerResult:
    value: Fraction
    achievers: frozenset[int]

    @property
    def is_corner(self) -> bool:
        return len(self.achievers) >= 2


def trop_eval(polynomial: TropicalPolynomial, point: Mapping[str, RationalLike]) -> CornerResult:
    missing = sorted(polynomial.variables - set(point))
    if missing:
        raise InputError(f"point has no value for {', '.join(missing)}")
    coordinates = {name: as_rational(value) for name, value in point.items()}
    values = [
        term.constant + sum((power * coordinates[name] for name, power in term.exponents), Fraction(0))
        for term in polynomial.terms
    ]
    top = max(values)
    return CornerResult(top, frozenset(index for index, value in enumerate(values) if value == top))


def coordinate_name(subset: Sequence[int]) -> str:
    return "p[" + ",".join(str(index) for index in sorted(subset)) + "]"


def pluecker_polynomial(i: int, j: int, k: int, l: int, common: Sequence[int] = ()) -> TropicalPolynomial:
    """Tropicalized three-term Plücker relation on the index set ``common`` plus two of i, j, k, l."""
    base = tuple(common)

    def pair(a: int, b: int, c: int, d: int) -> tuple[int, dict[str, int]]:
        return 0, {coordinate_name(base + (a, b)): 1, coordinate_name(base + (c, d)): 1}

    return TropicalPolynomial([pair(i, j, k, l), pair(i, k, j, l), pair(i, l, j, k)])


def _check_m(vector_n: int, m: int) -> None:
    if not 2 <= m <= vector_n:
        raise InputError(f"m must satisfy 2 <= m <= {vector_n}, got {m}")


def _cycle_sum(X: MVector, cycle: Sequence[int]) -> Fraction:
    return sum((X[(cycle[k], cycle[(k + 1) % len(cycle)])] for k in range(len(cycle))), Fraction(0))


def phi_m(X: MVector, m: int) -> MVector:
    """Half the shortest closed tour through each m-subset.

    Tours start at the smallest index and each tour is counted once per direction pair
    (the reversed tour is skipped), so (m-1)!/2 cycles are summed per subset.
    """
    if X.m != 2:
        raise InputError("phi needs a pairwise vector")
    _check_m(X.n, m)
    values = {}
    for subset in combinations(range(1, X.n + 1), m):
        first, rest = subset[0], subset[1:]
        best = min(
            _cycle_sum(X, (first, *order))
            for order in permutations(rest)
            if order[0] <= order[-1]
        )
        values[subset] = best / 2
    return MVector(X.n, m, values)


def phi_m_naive(X: MVector, m: int) -> MVector:
    """Same map summing every one of the (m-1)! cyclic orders."""
    if X.m != 2:
        raise InputError("phi needs a pairwise vector")
    _check_m(X.n, m)
    values = {}
    for subset in combinations(range(1, X.n + 1), m):
        first, rest = subset[0], subset[1:]
        values[subset] = min(_cycle_sum(X, (first, *order)) for order in permutations(rest)) / 2
    return MVector(X.n, m, values)


def _scan_common(V: MVector, common: tuple[int, ...]) -> Optional[Violation]:
    others = [index for index in range(1, V.n + 1) if index not in common]
    for i, j, k, l in combinations(others, 4):
        sums = [
            V[common + (i, j)] + V[common + (k, l)],
            V[common + (i, k)] + V[common + (j, l)],
            V[common + (i, l)] + V[common + (j, k)],
        ]
        if not attained_twice(sums):
            return Violation(kind=CheckKind.PLUECKER, indices=[i, j, k, l], common=list(common), values=sums)
    return None


def pluecker_3term_scan(V: MVector, m: Optional[int] = None, workers: Optional[int] = None) -> Optional[Violation]:
    """First three-term Plücker relation whose maximum is attained only once, or ``None``."""
    m = m or V.m
    if m != V.m:
        raise InputError(f"vector holds {V.m}-subsets, not {m}-subsets")
    if m < 2:
        raise InputError("Plücker relations need m >= 2")
    commons = list(combinations(range(1, V.n + 1), m - 2))
    for violation in parallel_map(lambda common: _scan_common(V, common), commons, workers):
        if violation:
            return violation
    return None


def grassmannian2_membership(D: DissimilarityMatrix, workers: Optional[int] = None) -> bool:
    """Three-term relations over all quadruples, reading ``x_ii`` as 0 where an index repeats."""
    if pluecker_3term_scan(D.as_vector(), 2, workers) is not None:
        return False
    return repeated_quadruple_violation(D) is None
