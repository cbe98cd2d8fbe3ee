"""Graded Koszul complex of a space of forms G = span(g_1, ..., g_r).

In degree m the term at position p is  Lambda^{r-p} G (x) A_{m-(r-p)D},
so position 0 is the wedge of all generators and position r is A_m itself.
Differentials contract: e_I (x) a  ->  sum_t (-1)^t e_{I - i_t} (x) a*g_{i_t}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from . import linalg
from .errors import InputError, LemmaViolation
from .jacobian import HypersurfaceInstance, evaluation_map, quotient_dims
from .matrix import ExactMatrix
from .poly import basis_size, monomial_basis, monomial_index


@dataclass(frozen=True)
class KoszulSetup:
    generators: tuple
    m: int

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise InputError("need at least one generator")
        v, D = gens[0].v, gens[0].degree
        for g in gens:
            if g.v != v or g.degree != D:
                raise InputError("generators must share variable count and degree")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_instance(cls, H: HypersurfaceInstance, m: int) -> "KoszulSetup":
        return cls(tuple(H.partials()), m)

    @property
    def v(self) -> int:
        return self.generators[0].v

    @property
    def D(self) -> int:
        return self.generators[0].degree

    @property
    def r(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class KoszulDegreePiece:
    setup: KoszulSetup
    term_bases: tuple  # per position: (wedges, monomial degree)
    differentials: tuple  # delta_p : position p -> p+1
    cohomology: tuple | None = field(default=None)

    def term_dim(self, p: int) -> int:
        wedges, deg = self.term_bases[p]
        return len(wedges) * basis_size(self.setup.v, deg)


def _term(setup: KoszulSetup, p: int):
    k = setup.r - p
    return tuple(combinations(range(setup.r), k)), setup.m - k * setup.D


def build_koszul(setup: KoszulSetup) -> KoszulDegreePiece:
    """Differential matrices of K(G)_m; negative-degree terms are zero spaces."""
    v, r = setup.v, setup.r
    terms = tuple(_term(setup, p) for p in range(r + 1))
    diffs = []
    for p in range(r):
        (src_w, src_deg), (dst_w, dst_deg) = terms[p], terms[p + 1]
        n_src = basis_size(v, src_deg)
        n_dst = basis_size(v, dst_deg)
        rows = [{} for _ in range(len(dst_w) * n_dst)]
        if n_src and n_dst:
            src_mons = monomial_basis(v, src_deg)
            dst_idx = monomial_index(v, dst_deg)
            wpos = {w: i for i, w in enumerate(dst_w)}
            for a, wedge in enumerate(src_w):
                for t, i in enumerate(wedge):
                    sign = -1 if t % 2 else 1
                    base = wpos[wedge[:t] + wedge[t + 1 :]] * n_dst
                    gterms = setup.generators[i].terms
                    for b, mono in enumerate(src_mons):
                        col = a * n_src + b
                        for gm, c in gterms.items():
                            row = base + dst_idx[tuple(x + y for x, y in zip(mono, gm))]
                            rows[row][col] = rows[row].get(col, 0) + sign * c
        diffs.append(ExactMatrix(len(dst_w) * n_dst, len(src_w) * n_src, rows))
    return KoszulDegreePiece(setup, terms, tuple(diffs))


def koszul_cohomology(setup: KoszulSetup | KoszulDegreePiece) -> tuple:
    """Dimensions (h^0, ..., h^r) of K(G)_m."""
    piece = setup if isinstance(setup, KoszulDegreePiece) else build_koszul(setup)
    r = piece.setup.r
    ranks = [linalg.rank(M) if M.rows and M.cols else 0 for M in piece.differentials]
    dims = [piece.term_dim(p) for p in range(r + 1)]
    h = []
    for p in range(r + 1):
        out_rank = ranks[p] if p < r else 0
        in_rank = ranks[p - 1] if p > 0 else 0
        h.append(dims[p] - out_rank - in_rank)
    return tuple(h)


def euler_characteristic(setup: KoszulSetup) -> int:
    """Alternating sum of term dimensions, in closed form."""
    r, v, D, m = setup.r, setup.v, setup.D, setup.m
    total = 0
    for p in range(r + 1):
        k = r - p
        deg = m - k * D
        total += (-1) ** p * comb(r, k) * (comb(deg + v - 1, v - 1) if deg >= 0 else 0)
    return total


def composition_vanishes(piece: KoszulDegreePiece) -> bool:
    """delta_{p+1} o delta_p == 0 exactly at every position."""
    ds = piece.differentials
    for a, b in zip(ds, ds[1:]):
        if a.cols and b.rows and not (b @ a).is_zero():
            return False
    return True


def koszul_table(H: HypersurfaceInstance, m: int) -> dict:
    if ("K", m) not in H._cache:
        H._cache[("K", m)] = koszul_cohomology(KoszulSetup.from_instance(H, m))
    return H._cache[("K", m)]


def verify_le33(H: HypersurfaceInstance, degrees=None, strict: bool = False) -> list:
    """Compare h^{n+1}(K_m) with coker ev_{sigma-m}.

    Rows are dicts with the two sides, the surjectivity of ev_{sigma-m}
    (under which h^{n+1}(K_m) must vanish) and an ``ok`` flag.
    """
    s = H.sigma
    if degrees is None:
        degrees = range(0, s + 4)
    rows = []
    for m in degrees:
        h = koszul_table(H, m)
        top = h[-2]
        cok = evaluation_map(H, s - m).coker_dim
        surj = cok == 0
        ok = top == cok and (not surj or top == 0)
        rows.append({"m": m, "h_top_minus_1": top, "coker_ev": cok, "ev_surjective": surj,
                     "h_top": h[-1], "dim_AJ": quotient_dims(H, m)[0], "ok": ok})
    if strict and not all(r["ok"] for r in rows):
        bad = [r["m"] for r in rows if not r["ok"]]
        raise LemmaViolation(f"h^(n+1)(K_m) != coker ev_(sigma-m) at m = {bad}")
    return rows


__all__ = [
    "KoszulSetup",
    "KoszulDegreePiece",
    "build_koszul",
    "koszul_cohomology",
    "euler_characteristic",
    "composition_vanishes",
    "verify_le33",
]
