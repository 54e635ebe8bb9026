"""Coefficient domains for Puiseux polynomials.

A coefficient is either an exact rational (the numeric domain, no variables) or a
multivariate polynomial over QQ in a fixed, named set of variables (a sympy sparse
``PolyElement``). Both support ``+``, ``-``, ``*`` and truthiness as the zero test, so
the polynomial and determinant code never needs to know which one it holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

from ..errors import InputError
from .rational import RationalLike, as_rational, format_rational

CoeffPoly = Union[Fraction, PolyElement]


@lru_cache(maxsize=None)
def _polynomial_ring(symbols: tuple[str, ...]) -> PolyRing:
    coefficient_ring, *_ = ring([Symbol(name) for name in symbols], QQ)
    return coefficient_ring


def _qq_to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class CoefficientDomain:
    symbols: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.symbols)) != len(self.symbols):
            raise InputError("coefficient variable names must be distinct")

    @property
    def is_numeric(self) -> bool:
        return not self.symbols

    @property
    def ring(self) -> PolyRing:
        if self.is_numeric:
            raise InputError("the numeric coefficient domain has no polynomial ring")
        return _polynomial_ring(self.symbols)

    @property
    def zero(self) -> CoeffPoly:
        return Fraction(0) if self.is_numeric else self.ring.zero

    @property
    def one(self) -> CoeffPoly:
        return Fraction(1) if self.is_numeric else self.ring.one

    def constant(self, value: RationalLike) -> CoeffPoly:
        number = as_rational(value)
        if self.is_numeric:
            return number
        return self.ring.ground_new(QQ(number.numerator, number.denominator))

    def variable(self, name: str) -> PolyElement:
        try:
            index = self.symbols.index(name)
        except ValueError:
            raise KeyError(f"unknown coefficient variable {name!r}") from None
        return self.ring.gens[index]

    def convert(self, value: CoeffPoly | RationalLike) -> CoeffPoly:
        if isinstance(value, PolyElement):
            if self.is_numeric or value.ring != self.ring:
                raise InputError("coefficient belongs to a different variable set")
            return value
        return self.constant(value)

    def total(self, values: Iterable[CoeffPoly]) -> CoeffPoly:
        """Sum many coefficients at once (linear in the total number of monomials)."""
        if self.is_numeric:
            return sum(values, Fraction(0))
        accumulated: dict = {}
        for value in values:
            for monom, coeff in value.items():
                accumulated[monom] = accumulated.get(monom, 0) + coeff
        return self.ring.from_dict({monom: coeff for monom, coeff in accumulated.items() if coeff})

    def term_count(self, value: CoeffPoly) -> int:
        if self.is_numeric:
            return 1 if value else 0
        return len(value)

    def is_homogeneous(self, value: CoeffPoly, degree: int) -> bool:
        if self.is_numeric:
            return degree == 0 or not value
        return all(sum(monom) == degree for monom in value.keys())

    def evaluate(self, value: CoeffPoly, point: dict[str, RationalLike]) -> Fraction:
        """Evaluate a coefficient at a rational point covering all variables."""
        if self.is_numeric:
            return value
        missing = [name for name in self.symbols if name not in point]
        if missing:
            raise KeyError(f"missing values for {', '.join(missing)}")
        numbers = [QQ(as_rational(point[name]).numerator, as_rational(point[name]).denominator) for name in self.symbols]
        return _qq_to_fraction(value.evaluate(list(zip(self.ring.gens, numbers))))

    def monomials(self, value: CoeffPoly) -> list[tuple[str, str]]:
        """Sorted ``(monomial, coefficient)`` pairs for golden-file comparison."""
        if self.is_numeric:
            return [("1", format_rational(value))] if value else []
        rows = []
        for monom, coeff in value.terms():
            factors = [
                name if power == 1 else f"{name}^{power}"
                for name, power in zip(self.symbols, monom)
                if power
            ]
            rows.append(("*".join(factors) or "1", format_rational(_qq_to_fraction(coeff))))
        return sorted(rows)

    def format(self, value: CoeffPoly) -> str:
        if self.is_numeric:
            return format_rational(value)
        return str(value)

    def rename(self, value: CoeffPoly, target: "CoefficientDomain", mapping: dict[str, str]) -> CoeffPoly:
        """Move a coefficient into ``target``, renaming variables by ``mapping``."""
        if self.is_numeric:
            return target.constant(value)
        positions = [target.symbols.index(mapping.get(name, name)) for name in self.symbols]
        width = len(target.symbols)
        terms = {}
        for monom, coeff in value.items():
            moved = [0] * width
            for index, power in enumerate(monom):
                if power:
                    moved[positions[index]] += power
            terms[tuple(moved)] = coeff
        return target.ring.from_dict(terms)


NUMERIC = CoefficientDomain()


def symbolic_domain(symbols: Sequence[str]) -> CoefficientDomain:
    return CoefficientDomain(tuple(symbols))
