from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from treetrop.arith import (
    NEG_INFINITY,
    POS_INFINITY,
    PolyMatrix,
    PuiseuxPoly,
    det_berkowitz,
    det_laplace,
    det_permutation,
    determinant,
    format_rational,
    parse_rational,
    symbolic_domain,
)
from treetrop.errors import InputError

exponents = st.integers(-4, 8).map(lambda k: Fraction(k, 2))
polys = st.dictionaries(exponents, st.integers(-5, 5), max_size=3).map(PuiseuxPoly)
nonzero_polys = st.dictionaries(exponents, st.integers(1, 5), min_size=1, max_size=3).map(PuiseuxPoly)
square_grids = st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(polys, min_size=n, max_size=n), min_size=n, max_size=n))


def t(exponent, coefficient=1) -> PuiseuxPoly:
    return PuiseuxPoly.monomial(coefficient, exponent)


def test_rationals_parse_and_format():
    assert parse_rational("6/4") == Fraction(3, 2)
    assert parse_rational(" 2.5 ") == Fraction(5, 2)
    assert format_rational(Fraction(3, 2)) == "3/2"
    assert format_rational(Fraction(4, 2)) == "2"
    for text in ("", "inf", "1e3", "nan"):
        with pytest.raises(ValueError):
            parse_rational(text)


def test_addition_cancels_terms():
    assert (t(2) - t(1)) + t(1) == t(2)


def test_fractional_exponents_add():
    assert t(Fraction(1, 2)) * t(Fraction(1, 2)) == t(1)


def test_multiplying_by_one_is_identity():
    domain = symbolic_domain(["a", "b"])
    p = PuiseuxPoly({4: domain.variable("a"), 2: domain.variable("b")}, domain)
    assert p * PuiseuxPoly.one(domain) == p


def test_degree_and_valuation():
    p = t(2) - t(1)
    assert p.degree() == 2
    assert p.valuation() == 1
    assert PuiseuxPoly.zero().degree() is NEG_INFINITY
    assert PuiseuxPoly.zero().valuation() is POS_INFINITY
    assert (t(Fraction(-1, 2)) + t(37)).valuation() == Fraction(-1, 2)


def test_substitute_scale():
    assert t(6).substitute_scale(Fraction(-1, 2)) == t(-3)
    assert (t(2) - t(1)).substitute_scale(Fraction(-1, 2)) == t(-1) - t(Fraction(-1, 2))
    p = t(3, 2) + t(-1, 5)
    assert p.substitute_scale(1) == p
    with pytest.raises(InputError):
        p.substitute_scale(0)


def test_mixing_variable_sets_is_rejected():
    left = PuiseuxPoly.monomial(symbolic_domain(["a"]).variable("a"), 1, symbolic_domain(["a"]))
    right = PuiseuxPoly.monomial(symbolic_domain(["b"]).variable("b"), 1, symbolic_domain(["b"]))
    with pytest.raises(InputError):
        left + right


def test_two_by_two_determinant():
    matrix = PolyMatrix([[1, 1], [t(1), t(2)]])
    assert determinant(matrix) == t(2) - t(1)


@pytest.mark.parametrize("size", [1, 3, 7])
def test_identity_determinant(size):
    assert determinant(PolyMatrix.identity(size)) == 1


def test_determinant_rejects_non_square_and_unknown_methods():
    with pytest.raises(InputError):
        determinant(PolyMatrix([[1, 2, 3], [4, 5, 6]]))
    with pytest.raises(InputError):
        determinant(PolyMatrix([[1]]), method="gauss")


def test_symbolic_determinant_methods_agree():
    domain = symbolic_domain([f"a{i}" for i in range(9)])
    grid = [
        [PuiseuxPoly({i + j: domain.variable(f"a{3 * i + j}"), 0: domain.one}, domain) for j in range(3)]
        for i in range(3)
    ]
    matrix = PolyMatrix(grid, domain)
    assert det_permutation(matrix) == det_laplace(matrix) == det_berkowitz(matrix)


@settings(max_examples=60, deadline=None)
@given(square_grids)
def test_determinant_strategies_agree(grid):
    matrix = PolyMatrix(grid)
    expected = det_laplace(matrix)
    assert det_permutation(matrix) == expected
    assert det_berkowitz(matrix) == expected


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(polys, min_size=4, max_size=4), min_size=4, max_size=4), st.integers(0, 3), st.integers(0, 3))
def test_row_swap_negates_determinant(grid, first, second):
    matrix = PolyMatrix(grid)
    swapped = matrix.swap_rows(first, second)
    if first == second:
        assert determinant(swapped) == determinant(matrix)
    else:
        assert determinant(swapped) == -determinant(matrix)


@given(nonzero_polys, nonzero_polys)
def test_degree_and_valuation_are_additive(p, q):
    assert (p * q).degree() == p.degree() + q.degree()
    assert (p * q).valuation() == p.valuation() + q.valuation()


@given(nonzero_polys, polys)
def test_degree_of_sum_is_bounded(p, q):
    total = p + q
    bound = p.degree() if q.is_zero else max(p.degree(), q.degree())
    if total:
        assert total.degree() <= bound


@given(polys, st.fractions(min_value=-4, max_value=4, max_denominator=6).filter(lambda s: s != 0))
def test_substitution_is_undone_by_the_inverse_scale(p, s):
    assert p.substitute_scale(s).substitute_scale(1 / s) == p


def test_records_keep_decreasing_exponents():
    p = t(3, 2) + t(Fraction(-1, 2), 7)
    records = p.to_records()
    assert records == [{"exponent": "3", "coefficient": "2"}, {"exponent": "-1/2", "coefficient": "7"}]
    assert PuiseuxPoly.from_records(records) == p
