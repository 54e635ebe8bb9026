"""Dense matrices of Puiseux polynomials and their exact determinants."""

from __future__ import annotations

from itertools import permutations
from typing import Callable, Iterable, Optional, Sequence, Union

from ..errors import InputError
from ..settings import settings
from .coeffs import NUMERIC, CoefficientDomain
from .puiseux import PuiseuxPoly
from .rational import RationalLike

Entry = Union[PuiseuxPoly, RationalLike]


class PolyMatrix:
    __slots__ = ("_entries", "rows", "cols", "domain")

    def __init__(self, entries: Sequence[Sequence[Entry]], domain: Optional[CoefficientDomain] = None) -> None:
        grid = [list(row) for row in entries]
        if not grid or not grid[0]:
            raise InputError("a matrix needs at least one row and one column")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise InputError("matrix rows must all have the same length")
        if domain is None:
            domain = next((value.domain for row in grid for value in row if isinstance(value, PuiseuxPoly)), NUMERIC)
        self.domain = domain
        self.rows = len(grid)
        self.cols = width
        self._entries = tuple(tuple(_as_poly(value, domain) for value in row) for row in grid)

    @classmethod
    def identity(cls, size: int, domain: CoefficientDomain = NUMERIC) -> "PolyMatrix":
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)], domain)

    def __getitem__(self, index: tuple[int, int]) -> PuiseuxPoly:
        row, col = index
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise IndexError(f"entry ({row}, {col}) outside a {self.rows}x{self.cols} matrix")
        return self._entries[row][col]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, index: int) -> tuple[PuiseuxPoly, ...]:
        return self._entries[index]

    def column(self, index: int) -> tuple[PuiseuxPoly, ...]:
        return tuple(row[index] for row in self._entries)

    def columns(self, indices: Iterable[int]) -> "PolyMatrix":
        """Submatrix made of the given columns, in the given order."""
        chosen = list(indices)
        return PolyMatrix([[row[j] for j in chosen] for row in self._entries], self.domain)

    def map_entries(self, fn: Callable[[PuiseuxPoly], PuiseuxPoly]) -> "PolyMatrix":
        return PolyMatrix([[fn(value) for value in row] for row in self._entries], self.domain)

    def scale_column(self, index: int, factor: PuiseuxPoly) -> "PolyMatrix":
        return PolyMatrix(
            [[value * factor if j == index else value for j, value in enumerate(row)] for row in self._entries],
            self.domain,
        )

    def swap_rows(self, first: int, second: int) -> "PolyMatrix":
        grid = [list(row) for row in self._entries]
        grid[first], grid[second] = grid[second], grid[first]
        return PolyMatrix(grid, self.domain)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.domain == other.domain and self._entries == other._entries

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols})"

    def to_records(self) -> list[list[list[dict[str, str]]]]:
        return [[value.to_records() for value in row] for row in self._entries]


def _as_poly(value: Entry, domain: CoefficientDomain) -> PuiseuxPoly:
    if isinstance(value, PuiseuxPoly):
        value._require_domain(domain)
        return value
    return PuiseuxPoly.monomial(value, 0, domain)


def _permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def det_permutation(matrix: PolyMatrix) -> PuiseuxPoly:
    """Leibniz sum over all permutations."""
    size = matrix.rows
    products = []
    for perm in permutations(range(size)):
        product = PuiseuxPoly.one(matrix.domain)
        for row, col in enumerate(perm):
            product = product * matrix[row, col]
            if not product:
                break
        if product:
            products.append(-product if _permutation_sign(perm) < 0 else product)
    return PuiseuxPoly.total(products, matrix.domain)


def det_laplace(matrix: PolyMatrix) -> PuiseuxPoly:
    """Cofactor expansion along successive rows, memoized on the remaining column set."""
    size = matrix.rows
    cache: dict[tuple[int, ...], PuiseuxPoly] = {}

    def minor(cols: tuple[int, ...]) -> PuiseuxPoly:
        row = size - len(cols)
        if not cols:
            return PuiseuxPoly.one(matrix.domain)
        if cols in cache:
            return cache[cols]
        terms = []
        for position, col in enumerate(cols):
            entry = matrix[row, col]
            if not entry:
                continue
            rest = minor(cols[:position] + cols[position + 1 :])
            term = entry * rest
            terms.append(-term if position % 2 else term)
        cache[cols] = PuiseuxPoly.total(terms, matrix.domain)
        return cache[cols]

    return minor(tuple(range(size)))


def det_berkowitz(matrix: PolyMatrix) -> PuiseuxPoly:
    """Division-free characteristic polynomial recursion; the determinant is its constant term up to sign."""
    size = matrix.rows
    domain = matrix.domain
    one = PuiseuxPoly.one(domain)
    vector = [one, -matrix[0, 0]]
    for r in range(1, size):
        leading = [[matrix[i, j] for j in range(r)] for i in range(r)]
        row_part = [matrix[r, j] for j in range(r)]
        column = [matrix[i, r] for i in range(r)]
        diagonals = [one, -matrix[r, r]]
        for _ in range(r):
            diagonals.append(-PuiseuxPoly.total((a * b for a, b in zip(row_part, column)), domain))
            column = [PuiseuxPoly.total((a * b for a, b in zip(line, column)), domain) for line in leading]
        vector = [
            PuiseuxPoly.total((diagonals[i - j] * vector[j] for j in range(min(i, r) + 1)), domain)
            for i in range(r + 2)
        ]
    return vector[-1] if size % 2 == 0 else -vector[-1]


_METHODS = {
    "permutation": det_permutation,
    "laplace": det_laplace,
    "berkowitz": det_berkowitz,
}


def determinant(matrix: PolyMatrix, method: Optional[str] = None) -> PuiseuxPoly:
    if not matrix.is_square:
        raise InputError(f"determinant needs a square matrix, got {matrix.rows}x{matrix.cols}")
    method = method or settings.determinant_method
    if method == "auto":
        method = "permutation" if matrix.rows <= settings.permutation_limit else "berkowitz"
    if method not in _METHODS:
        raise InputError(f"unknown determinant method {method!r}")
    return _METHODS[method](matrix)
