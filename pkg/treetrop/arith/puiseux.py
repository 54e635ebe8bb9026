"""Finitely supported Puiseux polynomials in the distinguished variable ``t``.

Exponents are exact rationals (negative and fractional ones included); coefficients
live in a :class:`CoefficientDomain`. Values are immutable and every operation returns
a new polynomial with zero terms removed.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from ..errors import InputError
from .coeffs import NUMERIC, CoefficientDomain, CoeffPoly
from .rational import NEG_INFINITY, POS_INFINITY, Infinity, RationalLike, as_rational, format_rational

Operand = Union["PuiseuxPoly", Fraction, int]


class PuiseuxPoly:
    __slots__ = ("_terms", "domain")

    def __init__(self, terms: Mapping[RationalLike, CoeffPoly | RationalLike] | None = None, domain: CoefficientDomain = NUMERIC) -> None:
        self.domain = domain
        cleaned: dict[Fraction, CoeffPoly] = {}
        for exponent, coefficient in (terms or {}).items():
            value = domain.convert(coefficient)
            if value:
                cleaned[as_rational(exponent)] = value
        self._terms = cleaned

    @classmethod
    def _raw(cls, terms: dict[Fraction, CoeffPoly], domain: CoefficientDomain) -> "PuiseuxPoly":
        poly = cls.__new__(cls)
        poly.domain = domain
        poly._terms = terms
        return poly

    @classmethod
    def zero(cls, domain: CoefficientDomain = NUMERIC) -> "PuiseuxPoly":
        return cls._raw({}, domain)

    @classmethod
    def one(cls, domain: CoefficientDomain = NUMERIC) -> "PuiseuxPoly":
        return cls.monomial(domain.one, 0, domain)

    @classmethod
    def monomial(cls, coefficient: CoeffPoly | RationalLike, exponent: RationalLike, domain: CoefficientDomain = NUMERIC) -> "PuiseuxPoly":
        return cls({exponent: coefficient}, domain)

    @classmethod
    def t_power(cls, exponent: RationalLike, domain: CoefficientDomain = NUMERIC) -> "PuiseuxPoly":
        return cls.monomial(domain.one, exponent, domain)

    @classmethod
    def total(cls, polys: Iterable["PuiseuxPoly"], domain: CoefficientDomain) -> "PuiseuxPoly":
        grouped: dict[Fraction, list[CoeffPoly]] = defaultdict(list)
        for poly in polys:
            poly._require_domain(domain)
            for exponent, coefficient in poly._terms.items():
                grouped[exponent].append(coefficient)
        return cls._collect(grouped, domain)

    @classmethod
    def _collect(cls, grouped: Mapping[Fraction, list[CoeffPoly]], domain: CoefficientDomain) -> "PuiseuxPoly":
        terms = {}
        for exponent, values in grouped.items():
            value = values[0] if len(values) == 1 else domain.total(values)
            if value:
                terms[exponent] = value
        return cls._raw(terms, domain)

    # -- inspection -----------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Fraction, CoeffPoly]]:
        return iter(self.items())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self) -> list[tuple[Fraction, CoeffPoly]]:
        """Terms in strictly decreasing exponent order."""
        return sorted(self._terms.items(), key=lambda item: item[0], reverse=True)

    def exponents(self) -> list[Fraction]:
        return sorted(self._terms, reverse=True)

    def coefficient(self, exponent: RationalLike) -> CoeffPoly:
        return self._terms.get(as_rational(exponent), self.domain.zero)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> Fraction | Infinity:
        if not self._terms:
            return NEG_INFINITY
        return max(self._terms)

    def valuation(self) -> Fraction | Infinity:
        if not self._terms:
            return POS_INFINITY
        return min(self._terms)

    def leading_coefficient(self) -> CoeffPoly:
        if not self._terms:
            return self.domain.zero
        return self._terms[max(self._terms)]

    def trailing_coefficient(self) -> CoeffPoly:
        if not self._terms:
            return self.domain.zero
        return self._terms[min(self._terms)]

    # -- arithmetic -----------------------------------------------------------------

    def _require_domain(self, domain: CoefficientDomain) -> None:
        if self.domain != domain:
            raise InputError("operands have different coefficient variable sets")

    def _coerce(self, other: Operand) -> "PuiseuxPoly":
        if isinstance(other, PuiseuxPoly):
            other._require_domain(self.domain)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return PuiseuxPoly.monomial(other, 0, self.domain)
        return NotImplemented

    def __add__(self, other: Operand) -> "PuiseuxPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for exponent, coefficient in other._terms.items():
            value = terms[exponent] + coefficient if exponent in terms else coefficient
            if value:
                terms[exponent] = value
            else:
                terms.pop(exponent, None)
        return PuiseuxPoly._raw(terms, self.domain)

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxPoly":
        return PuiseuxPoly._raw({exponent: -coefficient for exponent, coefficient in self._terms.items()}, self.domain)

    def __pos__(self) -> "PuiseuxPoly":
        return self

    def __sub__(self, other: Operand) -> "PuiseuxPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Operand) -> "PuiseuxPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Operand) -> "PuiseuxPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return PuiseuxPoly.zero(self.domain)
        if len(other._terms) == 1:
            ((shift, factor),) = other._terms.items()
            return self._scaled(shift, factor)
        if len(self._terms) == 1:
            ((shift, factor),) = self._terms.items()
            return other._scaled(shift, factor)
        grouped: dict[Fraction, list[CoeffPoly]] = defaultdict(list)
        for left_exponent, left in self._terms.items():
            for right_exponent, right in other._terms.items():
                grouped[left_exponent + right_exponent].append(left * right)
        return PuiseuxPoly._collect(grouped, self.domain)

    __rmul__ = __mul__

    def _scaled(self, shift: Fraction, factor: CoeffPoly) -> "PuiseuxPoly":
        terms = {}
        for exponent, coefficient in self._terms.items():
            value = coefficient * factor
            if value:
                terms[exponent + shift] = value
        return PuiseuxPoly._raw(terms, self.domain)

    def __pow__(self, power: int) -> "PuiseuxPoly":
        if not isinstance(power, int) or power < 0:
            raise InputError("only non-negative integer powers are supported")
        result = PuiseuxPoly.one(self.domain)
        for _ in range(power):
            result = result * self
        return result

    def shift(self, exponent: RationalLike) -> "PuiseuxPoly":
        """Multiply by ``t**exponent``."""
        return self._scaled(as_rational(exponent), self.domain.one)

    def substitute_scale(self, s: RationalLike) -> "PuiseuxPoly":
        """Substitute ``t -> t**s``: every exponent ``q`` becomes ``s*q``."""
        factor = as_rational(s)
        if factor == 0:
            raise InputError("substitution scale must be non-zero")
        return PuiseuxPoly._raw({exponent * factor: coefficient for exponent, coefficient in self._terms.items()}, self.domain)

    def map_coefficients(self, fn, domain: CoefficientDomain | None = None) -> "PuiseuxPoly":
        target = domain or self.domain
        return PuiseuxPoly({exponent: fn(coefficient) for exponent, coefficient in self._terms.items()}, target)

    # -- comparison and display -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = PuiseuxPoly.monomial(other, 0, self.domain)
        if not isinstance(other, PuiseuxPoly):
            return NotImplemented
        return self.domain == other.domain and self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PuiseuxPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exponent, coefficient in self.items():
            text = self.domain.format(coefficient)
            if not self.domain.is_numeric:
                text = f"({text})"
            if exponent == 0:
                parts.append(text)
            else:
                power = "t" if exponent == 1 else f"t^({format_rational(exponent)})"
                parts.append(power if text == "1" else f"{text}*{power}")
        return " + ".join(parts)

    def to_records(self) -> list[dict[str, str]]:
        return [
            {"exponent": format_rational(exponent), "coefficient": self.domain.format(coefficient)}
            for exponent, coefficient in self.items()
        ]

    @classmethod
    def from_records(cls, records: Iterable[Mapping[str, str]]) -> "PuiseuxPoly":
        """Numeric polynomials only; symbolic coefficients are not parsed back."""
        terms: dict[Fraction, Fraction] = {}
        previous: Fraction | None = None
        for record in records:
            exponent = as_rational(record["exponent"])
            if previous is not None and exponent >= previous:
                raise InputError("exponents must be strictly decreasing")
            previous = exponent
            terms[exponent] = as_rational(record["coefficient"])
        return cls(terms)


def poly_add(p: PuiseuxPoly, q: PuiseuxPoly) -> PuiseuxPoly:
    return p + q


def poly_mul(p: PuiseuxPoly, q: PuiseuxPoly) -> PuiseuxPoly:
    return p * q


def poly_neg(p: PuiseuxPoly) -> PuiseuxPoly:
    return -p


def degree(p: PuiseuxPoly) -> Fraction | Infinity:
    return p.degree()


def valuation(p: PuiseuxPoly) -> Fraction | Infinity:
    return p.valuation()


def substitute_scale(p: PuiseuxPoly, s: RationalLike) -> PuiseuxPoly:
    return p.substitute_scale(s)
