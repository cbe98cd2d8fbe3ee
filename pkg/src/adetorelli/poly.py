"""Sparse homogeneous polynomials with rational coefficients.

Monomials are exponent tuples.  Bases of a fixed degree are listed in
graded-lexicographic order with x0 > x1 > ..., largest monomial first, so
coordinate vectors (and every matrix built from them) are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping

Monomial = tuple  # tuple[int, ...]


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@lru_cache(maxsize=None)
def monomial_basis(v: int, m: int) -> tuple:
    """All exponent vectors of length ``v`` and degree ``m``, largest first."""
    if v < 1:
        raise ValueError("need at least one variable")
    if m < 0:
        return ()
    if v == 1:
        return ((m,),)
    out = []
    for a in range(m, -1, -1):
        for rest in monomial_basis(v - 1, m - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(v: int, m: int) -> dict:
    return {mono: i for i, mono in enumerate(monomial_basis(v, m))}


def basis_size(v: int, m: int) -> int:
    return comb(m + v - 1, v - 1) if m >= 0 else 0


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True, eq=True)
class HomogeneousPoly:
    """A form of fixed degree in ``v`` variables.

    ``terms`` maps exponent tuples to nonzero Fractions.  The zero form keeps
    the degree it was built with.
    """

    v: int
    degree: int
    terms: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != self.v:
                raise ValueError(f"monomial {mono} has wrong length (v={self.v})")
            if sum(mono) != self.degree or min(mono) < 0:
                raise ValueError(f"monomial {mono} is not of degree {self.degree}")
            c = to_fraction(c)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, v: int, degree: int) -> "HomogeneousPoly":
        return cls(v, degree, {})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff=1) -> "HomogeneousPoly":
        exps = tuple(exps)
        return cls(len(exps), sum(exps), {exps: coeff})

    @classmethod
    def from_vector(cls, v: int, degree: int, vec: Mapping) -> "HomogeneousPoly":
        """Inverse of :meth:`to_vector` for a sparse {index: coeff} vector."""
        basis = monomial_basis(v, degree)
        return cls(v, degree, {basis[i]: c for i, c in vec.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def to_vector(self) -> dict:
        """Sparse coordinates in ``monomial_basis(v, degree)``."""
        idx = monomial_index(self.v, self.degree)
        return {idx[mono]: c for mono, c in self.terms.items()}

    def __add__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        _check_same(self, other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, 0) + c
        return HomogeneousPoly(self.v, self.degree, terms)

    def __neg__(self) -> "HomogeneousPoly":
        return HomogeneousPoly(self.v, self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        return self + (-other)

    def scale(self, c) -> "HomogeneousPoly":
        c = to_fraction(c)
        return HomogeneousPoly(self.v, self.degree, {k: c * a for k, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HomogeneousPoly):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def evaluate(self, point) -> Fraction:
        point = [to_fraction(x) for x in point]
        total = Fraction(0)
        for mono, c in self.terms.items():
            t = c
            for x, e in zip(point, mono):
                if e:
                    t *= x**e
            total += t
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, reverse=True):
            c = self.terms[mono]
            vars_ = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(mono) if e
            )
            if not vars_:
                parts.append(str(c))
            elif c == 1:
                parts.append(vars_)
            elif c == -1:
                parts.append("-" + vars_)
            else:
                parts.append(f"{c}*{vars_}")
        return " + ".join(parts).replace("+ -", "- ")


def _check_same(p: HomogeneousPoly, q: HomogeneousPoly) -> None:
    if p.v != q.v or p.degree != q.degree:
        raise ValueError("forms live in different graded pieces")


def partial(p: HomogeneousPoly, i: int) -> HomogeneousPoly:
    """Derivative with respect to ``x_i``; degree drops by one."""
    if p.degree < 1:
        raise ValueError("cannot differentiate a form of degree 0")
    terms = {}
    for mono, c in p.terms.items():
        e = mono[i]
        if e:
            new = mono[:i] + (e - 1,) + mono[i + 1 :]
            terms[new] = c * e
    return HomogeneousPoly(p.v, p.degree - 1, terms)


def multiply(p: HomogeneousPoly, q: HomogeneousPoly) -> HomogeneousPoly:
    if p.v != q.v:
        raise ValueError("variable counts differ")
    terms: dict = {}
    for a, ca in p.terms.items():
        for b, cb in q.terms.items():
            m = mono_mul(a, b)
            terms[m] = terms.get(m, 0) + ca * cb
    return HomogeneousPoly(p.v, p.degree + q.degree, terms)


def gradient(p: HomogeneousPoly) -> list:
    return [partial(p, i) for i in range(p.v)]


def linear_forms(v: int) -> list:
    return [HomogeneousPoly.monomial(tuple(int(j == i) for j in range(v))) for i in range(v)]


def substitute_linear(p: HomogeneousPoly, A) -> HomogeneousPoly:
    """p(A y): variable x_i becomes sum_j A[i][j] y_j."""
    v = p.v
    forms = [
        HomogeneousPoly(v, 1, {tuple(int(k == j) for k in range(v)): A[i][j] for j in range(v)})
        for i in range(v)
    ]
    powers = [[HomogeneousPoly.monomial((0,) * v)] for _ in range(v)]
    out: dict = {}
    for mono, c in p.terms.items():
        t = HomogeneousPoly.monomial((0,) * v, c)
        for i, e in enumerate(mono):
            while len(powers[i]) <= e:
                powers[i].append(powers[i][-1] * forms[i])
            if e:
                t = t * powers[i][e]
        for m, a in t.terms.items():
            out[m] = out.get(m, 0) + a
    return HomogeneousPoly(v, p.degree, out)
