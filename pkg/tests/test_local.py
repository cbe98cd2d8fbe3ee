import math
import random
from fractions import Fraction

import pytest
import sympy as sp

from adetorelli.families import move_last_point_to
from adetorelli.local import (
    AffinePoint,
    NotSimpleError,
    classify_ade,
    distinct_roots_binary_cubic,
    milnor_number,
    tjurina_number,
    verify_singular,
)
from adetorelli.poly import HomogeneousPoly

from oracles import milnor_number_global

x, y, z = sp.symbols("x y z")

NORMAL_FORMS = {
    "A1": x**2 + y**2 + z**2,
    "A2": x**3 + y**2 + z**2,
    "A3": x**4 + y**2 + z**2,
    "A4": x**5 + y**2 + z**2,
    "A5": x**6 + y**2 + z**2,
    "D4": x**2 * y + y**3 + z**2,
    "D5": x**2 * y + y**4 + z**2,
    "E6": x**3 + y**4 + z**2,
    "E7": x**3 + x * y**3 + z**2,
    "E8": x**3 + y**5 + z**2,
}

# independently derived Milnor numbers of the affine normal forms (sympy Groebner)
ORACLE_MU = {"A1": 1, "A2": 2, "A3": 3, "A4": 4, "A5": 5, "D4": 4, "D5": 5, "E6": 6, "E7": 7, "E8": 8}


def homogenize(expr, extra_squares=0):
    """Projective form singular at [0:...:0:1] with the given affine germ there."""
    p = sp.Poly(expr, x, y, z)
    d = max(p.total_degree(), 3)
    v = 4 + extra_squares
    terms = {}
    for (a, b, c), coef in p.terms():
        mono = (a, b, c) + (0,) * extra_squares
        terms[mono + (d - a - b - c,)] = Fraction(int(coef))
    for i in range(extra_squares):
        mono = [0] * v
        mono[3 + i] = 2
        mono[-1] = d - 2
        terms[tuple(mono)] = Fraction(1)
    return HomogeneousPoly(v, d, terms)


def origin(v):
    return AffinePoint.from_projective([0] * (v - 1) + [1])


def test_oracle_milnor_numbers():
    for name, expr in NORMAL_FORMS.items():
        assert milnor_number_global(expr, (x, y, z)) == ORACLE_MU[name]


@pytest.mark.parametrize("name", list(NORMAL_FORMS))
def test_ade_battery_surfaces(name):
    f = homogenize(NORMAL_FORMS[name])
    rec = classify_ade(f, origin(4))
    assert rec.ade_type == name
    assert rec.milnor == rec.tjurina == ORACLE_MU[name]
    assert math.floor(rec.alpha_tilde) == 1


@pytest.mark.parametrize("name", list(NORMAL_FORMS))
def test_ade_battery_fourfold_suspensions(name):
    f = homogenize(NORMAL_FORMS[name], extra_squares=2)
    rec = classify_ade(f, origin(6))
    assert rec.ade_type == name
    assert rec.milnor == rec.tjurina == ORACLE_MU[name]
    assert math.floor(rec.alpha_tilde) > 1


def test_node_alpha_tilde():
    rec = classify_ade(homogenize(NORMAL_FORMS["A1"]), origin(4))
    assert rec.alpha_tilde == Fraction(3, 2)
    assert rec.weights == (Fraction(1, 2),) * 3


def test_a2_weights():
    rec = classify_ade(homogenize(NORMAL_FORMS["A2"]), origin(4))
    assert rec.weights == (Fraction(1, 3), Fraction(1, 2), Fraction(1, 2))
    assert rec.alpha_tilde == Fraction(4, 3)


@pytest.mark.parametrize("name", ["A1", "A3", "D4", "D5", "E6", "E7"])
def test_invariant_under_coordinate_change(name):
    rng = random.Random(hash(name) % 1000)
    f = homogenize(NORMAL_FORMS[name])
    base = classify_ade(f, origin(4))
    P = [rng.randint(-2, 2) for _ in range(3)] + [rng.choice([1, 2, -1])]
    g, _ = move_last_point_to(f, P, rng)
    Q = AffinePoint.from_projective(P)
    assert verify_singular(g, Q)
    rec = classify_ade(g, Q)
    assert (rec.ade_type, rec.tjurina, rec.milnor) == (base.ade_type, base.tjurina, base.milnor)


def test_not_singular():
    f = homogenize(NORMAL_FORMS["A1"])
    assert not verify_singular(f, AffinePoint.from_projective([1, 0, 0, 0]))
    assert tjurina_number(f, origin(4)) == 1


def test_non_simple_rejected():
    # corank 2 with vanishing 3-jet: not simple
    f = homogenize(x**4 + y**4 + z**2)
    with pytest.raises(NotSimpleError):
        classify_ade(f, origin(4))
    # corank 3
    f = homogenize(x**3 + y**3 + z**3)
    with pytest.raises(NotSimpleError):
        classify_ade(f, origin(4))


def test_non_quasi_homogeneous_has_tau_below_mu():
    # x^5 + y^5 + x^3 y^3 + z^2: mu = 16, tau = 15
    f = homogenize(x**5 + y**5 + x**3 * y**3 + z**2)
    P = origin(4)
    assert milnor_number(f, P) == 16
    assert tjurina_number(f, P) == 15
    with pytest.raises(NotSimpleError):
        classify_ade(f, P)


def test_chart_choice_uses_largest_coordinate():
    P = AffinePoint.from_projective([1, -4, 2, 0])
    assert P.chart == 1
    assert P.projective() == (Fraction(-1, 4), 1, Fraction(-1, 2), 0)


def test_binary_cubic_roots():
    assert distinct_roots_binary_cubic([1, 0, 0, -1]) == 3  # s^3 - t^3 over C
    assert distinct_roots_binary_cubic([0, 1, 0, 0]) == 2  # s^2 t
    assert distinct_roots_binary_cubic([1, 0, 0, 0]) == 1
