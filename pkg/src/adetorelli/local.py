"""Local analysis of a hypersurface at a declared singular point.

A projective point is dehomogenized in the chart of its largest-magnitude
coordinate.  Local functions are plain dicts {exponent tuple: Fraction} in
the n+1 remaining coordinates, centered at the point.  Tjurina and Milnor
algebras are computed as quotients of truncated jet spaces by linear
algebra, with an explicit determinacy certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from . import linalg
from .errors import InputError
from .matrix import ExactMatrix
from .poly import HomogeneousPoly, format_fraction, monomial_basis, to_fraction

DEFAULT_NMAX = 16


class InvalidChartError(InputError):
    pass


class NotSimpleError(InputError):
    """The point is not an isolated simple (ADE) singularity."""


class NotSingularError(InputError):
    pass


# ---------------------------------------------------------------------------
# points and jets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffinePoint:
    """A projective point written in the chart ``x_chart = 1``."""

    chart: int
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(to_fraction(c) for c in self.coords))

    @classmethod
    def from_projective(cls, point: Sequence) -> "AffinePoint":
        pt = [to_fraction(x) for x in point]
        if not any(pt):
            raise ValueError("projective point with all coordinates zero")
        mags = [abs(x) for x in pt]
        c = mags.index(max(mags))
        return cls(c, tuple(x / pt[c] for i, x in enumerate(pt) if i != c))

    @property
    def v(self) -> int:
        return len(self.coords) + 1

    def projective(self) -> tuple:
        out = list(self.coords)
        out.insert(self.chart, Fraction(1))
        return tuple(out)

    def __str__(self) -> str:
        return "[" + ":".join(str(x) for x in self.projective()) + "]"


@lru_cache(maxsize=4096)
def _shift_power(q: Fraction, a: int, N: int) -> tuple:
    """Coefficients of (q + y)^a in y, truncated at degree N."""
    return tuple(comb(a, k) * q ** (a - k) for k in range(min(a, N) + 1))


def _mul_trunc(p: dict, q: dict, N: int) -> dict:
    out: dict = {}
    for a, ca in p.items():
        da = sum(a)
        for b, cb in q.items():
            if da + sum(b) > N:
                continue
            m = tuple(x + y for x, y in zip(a, b))
            out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


def _monomial_jet(mono: tuple, P: AffinePoint, N: int) -> dict:
    nloc = P.v - 1
    exps = [e for i, e in enumerate(mono) if i != P.chart]
    jet = {(0,) * nloc: Fraction(1)}
    for j, (e, q) in enumerate(zip(exps, P.coords)):
        if not e:
            continue
        coeffs = _shift_power(q, e, N)
        fac = {}
        for k, c in enumerate(coeffs):
            if c:
                m = [0] * nloc
                m[j] = k
                fac[tuple(m)] = c
        jet = _mul_trunc(jet, fac, N)
    return jet


def taylor_jet(f: HomogeneousPoly, P: AffinePoint, N: int) -> dict:
    """Taylor expansion of f dehomogenized at P, truncated to degree <= N."""
    if N < 0:
        raise ValueError("jet order must be non-negative")
    if P.v != f.v:
        raise ValueError("point and form have different numbers of variables")
    if P.projective()[P.chart] != 1:
        raise InvalidChartError("chart coordinate of the point is zero")
    out: dict = {}
    for mono, c in f.terms.items():
        for m, x in _monomial_jet(mono, P, N).items():
            out[m] = out.get(m, 0) + c * x
    return {m: c for m, c in out.items() if c}


def local_partial(g: dict, j: int) -> dict:
    out = {}
    for m, c in g.items():
        if m[j]:
            out[m[:j] + (m[j] - 1,) + m[j + 1 :]] = c * m[j]
    return out


def verify_singular(f: HomogeneousPoly, point) -> bool:
    """True iff f and all its partials vanish at the projective point."""
    pt = point.projective() if isinstance(point, AffinePoint) else tuple(point)
    if f.evaluate(pt) != 0:
        return False
    for i in range(f.v):
        terms = {}
        for mono, c in f.terms.items():
            if mono[i]:
                terms[mono[:i] + (mono[i] - 1,) + mono[i + 1 :]] = c * mono[i]
        if f.degree >= 1 and HomogeneousPoly(f.v, f.degree - 1, terms).evaluate(pt) != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# local algebras
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def jet_basis(nloc: int, N: int) -> tuple:
    """Local monomials of degree <= N, highest degree first.

    Pivots are taken from the left, so with this column order the quotient
    basis consists of the lowest-degree standard monomials.
    """
    out = []
    for deg in range(N, -1, -1):
        out.extend(monomial_basis(nloc, deg))
    return tuple(out)


@lru_cache(maxsize=None)
def _jet_index(nloc: int, N: int) -> dict:
    return {m: i for i, m in enumerate(jet_basis(nloc, N))}


@dataclass(frozen=True)
class LocalAlgebra:
    """O / (ideal + m^(N+1)) with a monomial basis and a reduction map."""

    order: int
    nloc: int
    basis: tuple
    reduction: linalg.Rref = field(repr=False, compare=False)
    mode: str = "tjurina"

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def coordinates(self, jet: dict) -> dict:
        """Coordinates of a jet (order <= N) in ``basis``; sparse {index: c}."""
        idx = _jet_index(self.nloc, self.order)
        vec = {}
        for m, c in jet.items():
            if sum(m) <= self.order and c:
                vec[idx[m]] = c
        nf = self.reduction.reduce(vec)
        pos = self._basis_pos()
        return {pos[j]: c for j, c in nf.items()}

    def _basis_pos(self) -> dict:
        cache = self.__dict__.get("_pos")
        if cache is None:
            idx = _jet_index(self.nloc, self.order)
            cache = {idx[m]: k for k, m in enumerate(self.basis)}
            object.__setattr__(self, "_pos", cache)
        return cache

    def contains_all_of_degree(self, k: int) -> bool:
        """Is every monomial of degree k in the truncated ideal?"""
        idx = _jet_index(self.nloc, self.order)
        return all(self.reduction.contains({idx[m]: 1}) for m in monomial_basis(self.nloc, k))


def _generators(g: dict, nloc: int, mode: str) -> list:
    gens = [local_partial(g, j) for j in range(nloc)]
    if mode == "tjurina":
        gens.insert(0, g)
    elif mode != "milnor":
        raise ValueError(f"unknown mode {mode!r}")
    return [h for h in gens if h]


def local_algebra_of_jet(g: dict, nloc: int, mode: str, N: int) -> LocalAlgebra:
    idx = _jet_index(nloc, N)
    rows = []
    for h in _generators(g, nloc, mode):
        h = {m: c for m, c in h.items() if sum(m) <= N}
        if not h:
            continue
        low = min(sum(m) for m in h)
        for k in range(0, N - low + 1):
            for a in monomial_basis(nloc, k):
                row = {}
                for m, c in h.items():
                    if sum(m) + k <= N:
                        row[idx[tuple(x + y for x, y in zip(m, a))]] = c
                if row:
                    rows.append(row)
    ncols = len(idx)
    R = linalg.rref(ExactMatrix(len(rows), ncols, rows))
    cols = jet_basis(nloc, N)
    basis = tuple(sorted((cols[j] for j in R.free_columns), key=lambda m: (sum(m), tuple(-e for e in m))))
    return LocalAlgebra(N, nloc, basis, R, mode)


def local_algebra(f: HomogeneousPoly, P: AffinePoint, mode: str = "tjurina", N: int = 6) -> LocalAlgebra:
    g = taylor_jet(f, P, max(N, f.degree))
    return local_algebra_of_jet(g, P.v - 1, mode, N)


def _stabilized(g: dict, nloc: int, mode: str, nmax: int):
    prev = None
    for N in range(4, nmax + 1, 2):
        alg = local_algebra_of_jet(g, nloc, mode, N)
        if prev is not None and prev.dimension == alg.dimension and alg.contains_all_of_degree(N - 1):
            return alg
        prev = alg
    raise NotSimpleError("not an isolated simple singularity within jet bound")


def tjurina_algebra(f: HomogeneousPoly, P: AffinePoint, nmax: int = DEFAULT_NMAX, mode: str = "tjurina") -> LocalAlgebra:
    """Stabilized local algebra; raises NotSimpleError past ``nmax``."""
    if not verify_singular(f, P):
        raise NotSingularError(f"{P} is not a singular point of the hypersurface")
    g = taylor_jet(f, P, f.degree)
    return _stabilized(g, P.v - 1, mode, nmax)


def tjurina_number(f: HomogeneousPoly, P: AffinePoint, nmax: int = DEFAULT_NMAX) -> int:
    return tjurina_algebra(f, P, nmax).dimension


def milnor_number(f: HomogeneousPoly, P: AffinePoint, nmax: int = DEFAULT_NMAX) -> int:
    return tjurina_algebra(f, P, nmax, mode="milnor").dimension


# ---------------------------------------------------------------------------
# ADE classification
# ---------------------------------------------------------------------------


def ade_weights(ade_type: str, nvars: int) -> tuple:
    """Quasi-homogeneous weights of the normal form, padded with 1/2."""
    kind, k = ade_type[0], int(ade_type[1:])
    half = Fraction(1, 2)
    if kind == "A":
        head = [Fraction(1, k + 1)]
    elif kind == "D":
        head = [Fraction(k - 2, 2 * (k - 1)), Fraction(1, k - 1)]
    elif kind == "E":
        head = {6: [Fraction(1, 3), Fraction(1, 4)],
                7: [Fraction(1, 3), Fraction(2, 9)],
                8: [Fraction(1, 3), Fraction(1, 5)]}[k]
    else:
        raise ValueError(ade_type)
    if len(head) > nvars:
        raise ValueError(f"{ade_type} needs at least {len(head)} local variables")
    return tuple(head + [half] * (nvars - len(head)))


@dataclass(frozen=True)
class SingularityRecord:
    point: AffinePoint
    ade_type: str
    tjurina: int
    milnor: int
    weights: tuple
    alpha_tilde: Fraction
    algebra: LocalAlgebra = field(repr=False, compare=False, default=None)

    def as_dict(self) -> dict:
        return {
            "point": [format_fraction(x) for x in self.point.projective()],
            "type": self.ade_type,
            "tau": self.tjurina,
            "mu": self.milnor,
            "weights": [format_fraction(w) for w in self.weights],
            "alpha_tilde": format_fraction(self.alpha_tilde),
        }


def hessian(g: dict, nloc: int) -> ExactMatrix:
    H = [[0] * nloc for _ in range(nloc)]
    for m, c in g.items():
        if sum(m) != 2:
            continue
        nz = [i for i, e in enumerate(m) if e]
        if len(nz) == 1:
            H[nz[0]][nz[0]] = 2 * c
        else:
            i, j = nz
            H[i][j] = H[j][i] = c
    return ExactMatrix.from_dense(H)


def _binary_cubic(g: dict, k1: dict, k2: dict, nloc: int) -> list:
    """Coefficients [s^3, s^2 t, s t^2, t^3] of the cubic part on span(k1, k2)."""
    a = [k1.get(i, 0) for i in range(nloc)]
    b = [k2.get(i, 0) for i in range(nloc)]
    # each variable y_i = a_i s + b_i t; expand term by term
    out = [Fraction(0)] * 4
    for m, c in g.items():
        if sum(m) != 3:
            continue
        poly = {0: Fraction(c)}  # keyed by power of t
        for i, e in enumerate(m):
            for _ in range(e):
                nxt: dict = {}
                for tp, x in poly.items():
                    if a[i]:
                        nxt[tp] = nxt.get(tp, 0) + x * a[i]
                    if b[i]:
                        nxt[tp + 1] = nxt.get(tp + 1, 0) + x * b[i]
                poly = nxt
        for tp, x in poly.items():
            out[tp] += x
    return out


def _upoly_trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _upoly_rem(a: list, b: list) -> list:
    a = _upoly_trim(a)
    b = _upoly_trim(b)
    while len(a) >= len(b) and a:
        q = Fraction(a[-1]) / b[-1]
        shift = len(a) - len(b)
        for i, x in enumerate(b):
            a[i + shift] -= q * x
        a = _upoly_trim(a)
    return a


def _upoly_gcd_degree(a: list, b: list) -> int:
    a, b = _upoly_trim(a), _upoly_trim(b)
    while b:
        a, b = b, _upoly_rem(a, b)
    return len(a) - 1


def distinct_roots_binary_cubic(coeffs: list) -> int:
    """Number of distinct roots on P^1 of a nonzero binary cubic.

    ``coeffs`` = [s^3, s^2 t, s t^2, t^3].  Uses gcd with the derivative of
    the dehomogenization at t = 1; a missing top degree is a root at
    infinity.
    """
    p = [coeffs[3], coeffs[2], coeffs[1], coeffs[0]]  # ascending powers of s
    p = _upoly_trim(p)
    if not p:
        raise ValueError("zero cubic")
    deg = len(p) - 1
    if deg == 0:
        return 1  # all three roots at infinity
    dp = [i * c for i, c in enumerate(p)][1:]
    finite = deg - _upoly_gcd_degree(p, dp)
    return finite + (1 if deg < 3 else 0)


def classify_jet(g: dict, nloc: int, nmax: int = DEFAULT_NMAX):
    """ADE type, tau and mu of a local function germ with a critical point at 0."""
    tj = _stabilized(g, nloc, "tjurina", nmax)
    mi = _stabilized(g, nloc, "milnor", nmax)
    tau, mu = tj.dimension, mi.dimension
    if tau != mu:
        raise NotSimpleError(f"mu={mu} differs from tau={tau}: not quasi-homogeneous")
    H = hessian(g, nloc)
    corank = nloc - linalg.rank(H)
    if corank == 0:
        if mu != 1:  # pragma: no cover - a Morse point has mu = 1
            raise NotSimpleError("nondegenerate Hessian but mu != 1")
        kind = "A1"
    elif corank == 1:
        kind = f"A{mu}"
    elif corank == 2:
        K = linalg.kernel_basis(H)
        cubic = _binary_cubic(g, K.row(0), K.row(1), nloc)
        if not any(cubic):
            raise NotSimpleError("corank 2 with vanishing cubic term")
        roots = distinct_roots_binary_cubic(cubic)
        if roots == 3 and mu == 4:
            kind = "D4"
        elif roots == 2 and mu >= 5:
            kind = f"D{mu}"
        elif roots == 1 and mu in (6, 7, 8):
            kind = f"E{mu}"
        else:
            raise NotSimpleError(f"no ADE pattern for corank 2, {roots} cubic roots, mu={mu}")
    else:
        raise NotSimpleError(f"Hessian corank {corank} >= 3")
    return kind, tau, mu, tj


def classify_ade(f: HomogeneousPoly, P: AffinePoint, nmax: int = DEFAULT_NMAX) -> SingularityRecord:
    if not verify_singular(f, P):
        raise NotSingularError(f"{P} is not a singular point of the hypersurface")
    nloc = P.v - 1
    g = taylor_jet(f, P, f.degree)
    kind, tau, mu, alg = classify_jet(g, nloc, nmax)
    w = ade_weights(kind, nloc)
    return SingularityRecord(P, kind, tau, mu, w, sum(w, Fraction(0)), alg)
