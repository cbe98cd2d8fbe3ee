from fractions import Fraction
from math import comb

import pytest

from adetorelli.poly import (
    HomogeneousPoly,
    basis_size,
    format_fraction,
    gradient,
    linear_forms,
    monomial_basis,
    multiply,
    partial,
    substitute_linear,
)


def P(v, d, terms):
    return HomogeneousPoly(v, d, {tuple(k): c for k, c in terms.items()})


@pytest.mark.parametrize("v,m,count", [(4, 2, 10), (4, 0, 1), (3, 5, 21)])
def test_monomial_basis_examples(v, m, count):
    basis = monomial_basis(v, m)
    assert len(basis) == count
    assert all(sum(b) == m for b in basis)


def test_constant_monomial():
    assert monomial_basis(4, 0) == ((0, 0, 0, 0),)


def test_basis_counts_closed_form():
    for v in range(1, 9):
        for m in range(0, 31):
            assert basis_size(v, m) == comb(m + v - 1, v - 1)
    # enumerate in full where it stays small
    for v in range(1, 5):
        for m in range(0, 12):
            assert len(monomial_basis(v, m)) == comb(m + v - 1, v - 1)


def test_graded_lex_order_largest_first():
    b = monomial_basis(3, 2)
    assert b[0] == (2, 0, 0)
    assert b[-1] == (0, 0, 2)
    assert list(b) == sorted(b, reverse=True)
    assert len(set(b)) == len(b)


def test_partial_examples():
    x4 = P(2, 4, {(4, 0): 1})
    assert partial(x4, 0) == P(2, 3, {(3, 0): 4})
    dy = partial(x4, 1)
    assert dy.is_zero() and dy.degree == 3


def test_euler_identity():
    f = P(3, 4, {(4, 0, 0): 3, (1, 2, 1): Fraction(-2, 7), (0, 0, 4): 5, (2, 1, 1): 1})
    xs = linear_forms(3)
    total = HomogeneousPoly.zero(3, 4)
    for x, g in zip(xs, gradient(f)):
        total = total + x * g
    assert total == f.scale(4)


def test_multiply_examples():
    x, y = linear_forms(2)
    assert x * x == P(2, 2, {(2, 0): 1})
    assert (x * HomogeneousPoly.zero(2, 3)).is_zero()
    assert multiply(x + y, x - y) == P(2, 2, {(2, 0): 1, (0, 2): -1})


def test_no_zero_terms_stored():
    p = P(2, 1, {(1, 0): 1, (0, 1): 0})
    assert p.terms == {(1, 0): 1}
    assert (p - p).terms == {}


def test_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        P(2, 2, {(1, 0): 1})


def test_vector_round_trip():
    f = P(3, 3, {(3, 0, 0): 2, (0, 1, 2): Fraction(1, 3)})
    assert HomogeneousPoly.from_vector(3, 3, f.to_vector()) == f


def test_evaluate():
    f = P(2, 2, {(2, 0): 1, (1, 1): -3})
    assert f.evaluate([2, Fraction(1, 3)]) == 2


def test_substitute_identity_and_swap():
    f = P(3, 3, {(3, 0, 0): 1, (0, 1, 2): 4})
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert substitute_linear(f, eye) == f
    swap = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    assert substitute_linear(f, swap) == P(3, 3, {(0, 3, 0): 1, (1, 0, 2): 4})


def test_format_fraction():
    assert format_fraction(Fraction(3, 2)) == "3/2"
    assert format_fraction(Fraction(-4, 1)) == "-4/1"
