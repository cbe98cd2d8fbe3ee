"""Small generators of test hypersurfaces: Fermat forms and random forms
with prescribed singularities at rational points."""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .matrix import ExactMatrix
from .poly import HomogeneousPoly, monomial_basis, substitute_linear


def fermat(n: int, d: int) -> HomogeneousPoly:
    v = n + 2
    return HomogeneousPoly(v, d, {tuple(d if j == i else 0 for j in range(v)): 1 for i in range(v)})


def _rand_coeff(rng: random.Random, size: int) -> int:
    c = 0
    while c == 0:
        c = rng.randint(-size, size)
    return c


def form_with_node_at_last(n: int, d: int, rng: random.Random, density: float = 0.6, size: int = 3) -> HomogeneousPoly:
    """w^{d-2} * (sum of squares) + pure powers + random terms of w-degree <= d-3.

    The 1-jet at [0:..:0:1] vanishes and the Hessian there is the identity,
    so that point is a node.  Other singular points are not excluded here.
    """
    v = n + 2
    terms = {}
    for i in range(v - 1):
        mono = [0] * v
        mono[i] = 2
        mono[-1] = d - 2
        terms[tuple(mono)] = _rand_coeff(rng, size)
    for i in range(v - 1):
        mono = [0] * v
        mono[i] = d
        terms[tuple(mono)] = _rand_coeff(rng, size)
    for mono in monomial_basis(v, d):
        if mono[-1] <= d - 3 and rng.random() < density:
            terms[mono] = terms.get(mono, 0) + _rand_coeff(rng, size)
    return HomogeneousPoly(v, d, terms)


def _inverse(A) -> list:
    v = len(A)
    aug = ExactMatrix.from_dense([list(A[i]) + [int(i == j) for j in range(v)] for i in range(v)])
    R = linalg.rref(aug)
    if R.rank != v or list(R.pivots) != list(range(v)):
        raise ValueError("matrix is singular")
    return [[R.rows[i].get(v + j, Fraction(0)) for j in range(v)] for i in range(v)]


def move_last_point_to(f: HomogeneousPoly, P, rng: random.Random | None = None):
    """Return (g, A) with g = f(A^{-1} y), so g is singular at P iff f is at e_last.

    A sends e_last to P; its other columns are unit vectors (plus a random
    shear when ``rng`` is given) chosen to keep A invertible.
    """
    v = f.v
    P = [Fraction(x) for x in P]
    k = next(i for i in range(v - 1, -1, -1) if P[i])
    while True:
        cols = [[int(r == i) for r in range(v)] for i in range(v) if i != k]
        if rng is not None:
            for c in cols:
                for r in range(v):
                    if rng.random() < 0.3:
                        c[r] += rng.randint(-1, 1)
        A = [[0] * v for _ in range(v)]
        for j, c in enumerate(cols + [P]):
            for r in range(v):
                A[r][j] = c[r]
        try:
            return substitute_linear(f, _inverse(A)), A
        except ValueError:
            if rng is None:  # pragma: no cover - unit columns plus P are independent
                raise


def random_nodal(n: int, d: int, seed: int, density: float = 0.6):
    """A random form with a node at a random rational point, and that point."""
    rng = random.Random(seed)
    f = form_with_node_at_last(n, d, rng, density)
    v = n + 2
    P = [0] * v
    while not any(P):
        P = [rng.randint(-2, 2) for _ in range(v)]
    g, _ = move_last_point_to(f, P, rng)
    return g, P
