"""Exact rank, kernel and image over Q.

Two exact routes share one interface:

* fraction-free elimination on primitive integer rows (sparse incremental
  echelon, or dense Bareiss when the matrix is more than half full);
* a multi-modular route: reduced echelon forms modulo several 31-bit primes,
  combined by CRT and rational reconstruction, then certified over Q.

The modular route never returns an uncertified answer.  Its rank lower bound
comes from a nonzero minor mod p; the upper bound from checking every row of
the input exactly against the reconstructed echelon form.  When
reconstruction does not certify within the prime budget, the fraction-free
route runs instead.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Mapping

import numpy as np

from . import _kernels
from .errors import BudgetExceeded
from .matrix import ExactMatrix, _norm

log = logging.getLogger(__name__)

# rows*cols below which the modular route is not worth its setup cost
MODULAR_THRESHOLD = 2_000
# prime budget for reconstruction before falling back to fraction-free
MAX_PRIMES = 192
DENSE_FILL = 0.5
# the modular kernels work on dense int64 copies; refuse beyond ~200 MB each
MAX_DENSE_ENTRIES = 25_000_000
# lifting pays back its setup (two eliminations and an inverse) only when
# there are several free columns; below this CRT over many primes is cheaper
DIXON_MIN_FREE = 3


# ---------------------------------------------------------------------------
# integer row helpers
# ---------------------------------------------------------------------------


def _primitive(row: dict) -> dict:
    """Divide by the content and make the leading coefficient positive."""
    if not row:
        return row
    g = 0
    for c in row.values():
        g = gcd(g, c)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g == 1:
        return row
    return {j: c // g for j, c in row.items()}


def integer_rows(M: ExactMatrix) -> list:
    """Primitive integer multiples of the nonzero rows of ``M``."""
    out = []
    for r in M.row_dicts():
        if not r:
            out.append({})
            continue
        dens = [c.denominator for c in r.values() if isinstance(c, Fraction)]
        if dens:
            L = reduce(lcm, dens, 1)
            r = {j: int(c * L) for j, c in r.items()}
        else:
            r = dict(r)
        out.append(_primitive(r))
    return out


# ---------------------------------------------------------------------------
# fraction-free elimination
# ---------------------------------------------------------------------------


def _sparse_echelon(rows: list) -> dict:
    """Incremental echelon form: {pivot column: primitive integer row}.

    Each incoming row is reduced against existing pivots in increasing
    column order until its leading column is new or it vanishes.
    """
    pivots: dict = {}
    for row in rows:
        if not row:
            continue
        r = dict(row)
        heap = list(r)
        heapq.heapify(heap)
        steps = 0
        while heap:
            c = heapq.heappop(heap)
            b = r.get(c)
            if not b:
                continue
            prow = pivots.get(c)
            if prow is None:
                pivots[c] = _primitive(r)
                break
            a = prow[c]
            g = gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                for j in r:
                    r[j] *= a
            for j, x in prow.items():
                y = r.get(j)
                if y is None:
                    r[j] = -b * x
                    heapq.heappush(heap, j)
                else:
                    y -= b * x
                    if y:
                        r[j] = y
                    else:
                        del r[j]
            steps += 1
            if steps % 16 == 0 and r:
                r = _primitive(r)
    return pivots


def _bareiss_echelon(rows: list, ncols: int) -> dict:
    """Dense fraction-free (Bareiss) echelon form, returned like ``_sparse_echelon``."""
    A = [[r.get(j, 0) for j in range(ncols)] for r in rows if r]
    m = len(A)
    pivots: dict = {}
    prev = 1
    k = 0
    for c in range(ncols):
        if k == m:
            break
        piv = next((i for i in range(k, m) if A[i][c]), None)
        if piv is None:
            continue
        A[k], A[piv] = A[piv], A[k]
        pk = A[k]
        p = pk[c]
        for i in range(k + 1, m):
            ai = A[i]
            f = ai[c]
            if f:
                for j in range(c, ncols):
                    ai[j] = (p * ai[j] - f * pk[j]) // prev
            else:
                for j in range(c, ncols):
                    ai[j] = (p * ai[j]) // prev
        pivots[c] = _primitive({j: x for j, x in enumerate(pk) if x})
        prev = p
        k += 1
    return pivots


def _echelon(rows: list, ncols: int) -> dict:
    nz = sum(len(r) for r in rows)
    nrows = sum(1 for r in rows if r)
    if nrows and ncols and nz > DENSE_FILL * nrows * ncols and nrows * ncols <= 250_000:
        return _bareiss_echelon(rows, ncols)
    return _sparse_echelon(rows)


def _back_substitute(pivots: dict) -> tuple:
    """Turn an integer echelon form into the reduced form with unit pivots."""
    cols = sorted(pivots)
    done: dict = {}
    for c in reversed(cols):
        r = dict(pivots[c])
        for c2 in [j for j in r if j != c and j in done]:
            b = r[c2]
            a = done[c2][c2]
            g = gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                for j in r:
                    r[j] *= a
            for j, x in done[c2].items():
                y = r.get(j, 0) - b * x
                if y:
                    r[j] = y
                else:
                    r.pop(j, None)
        done[c] = _primitive(r)
    out = []
    for c in cols:
        r = done[c]
        p = r[c]
        out.append({j: _norm(Fraction(x, p)) for j, x in r.items()})
    return tuple(cols), tuple(out)


# ---------------------------------------------------------------------------
# reduced row echelon form object
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rref:
    """Reduced row echelon form of a row space; pivot entries are 1."""

    ncols: int
    pivots: tuple
    rows: tuple

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def free_columns(self) -> list:
        ps = set(self.pivots)
        return [j for j in range(self.ncols) if j not in ps]

    def reduce(self, vec: Mapping) -> dict:
        """Normal form of ``vec`` modulo the row space."""
        v = {j: c for j, c in vec.items() if c}
        pidx = self._pivot_index()
        hits = [j for j in v if j in pidx]
        for c in hits:
            a = v.get(c)
            if not a:
                continue
            for j, x in self.rows[pidx[c]].items():
                y = v.get(j, 0) - a * x
                if y:
                    v[j] = _norm(y)
                else:
                    v.pop(j, None)
        return v

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def _pivot_index(self) -> dict:
        cache = self.__dict__.get("_pidx")
        if cache is None:
            cache = {c: i for i, c in enumerate(self.pivots)}
            object.__setattr__(self, "_pidx", cache)
        return cache

    def kernel(self) -> ExactMatrix:
        """Right kernel basis, one row per free column."""
        data = []
        cols_rows = [(c, r) for c, r in zip(self.pivots, self.rows)]
        by_free: dict = {}
        for c, r in cols_rows:
            for j, x in r.items():
                if j != c:
                    by_free.setdefault(j, []).append((c, x))
        for j in self.free_columns:
            vec = {j: 1}
            for c, x in by_free.get(j, ()):
                vec[c] = -x
            data.append(vec)
        return ExactMatrix(len(data), self.ncols, data)

    def as_matrix(self) -> ExactMatrix:
        return ExactMatrix(len(self.rows), self.ncols, list(self.rows))


# ---------------------------------------------------------------------------
# modular route
# ---------------------------------------------------------------------------


def _dense_int64(rows: list, ncols: int):
    """Dense int64 copy of integer rows, or None if an entry does not fit."""
    lim = 1 << 62
    A = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, r in enumerate(rows):
        if r:
            vals = list(r.values())
            if any(not -lim < x < lim for x in vals):
                return None
            A[i, list(r.keys())] = vals
    return A


def _dense_mod(rows: list, ncols: int, p: int, base=None) -> np.ndarray:
    if base is not None:
        return base % p
    A = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, r in enumerate(rows):
        if r:
            idx = np.fromiter(r.keys(), dtype=np.int64, count=len(r))
            val = np.fromiter((x % p for x in r.values()), dtype=np.int64, count=len(r))
            A[i, idx] = val
    return A


def rank_mod_p(M: ExactMatrix, p: int = _kernels.PRIMES[0]) -> int:
    """Rank of ``M`` (rows scaled to integers) modulo the prime ``p``."""
    rows = [r for r in integer_rows(M) if r]
    if not rows or not M.cols:
        return 0
    A = _dense_mod(rows, M.cols, p)
    r, _ = _kernels.eliminate_mod_p(A, p, reduced=False)
    return int(r)


def _modular_rank(rows: list, ncols: int, p: int) -> tuple:
    A = _dense_mod(rows, ncols, p)
    r, piv = _kernels.eliminate_mod_p(A, p, reduced=False)
    return int(r), tuple(int(c) for c in piv)


def _modular_rref_image(rows: list, ncols: int, p: int, base=None):
    A = _dense_mod(rows, ncols, p, base)
    r, piv = _kernels.eliminate_mod_p(A, p, reduced=True)
    r = int(r)
    return r, tuple(int(c) for c in piv), A[:r]


def _certify(rows: list, pivots: tuple, cand: list) -> bool:
    """Check every input row equals the combination of candidate rows
    given by its pivot-column entries.  ``cand`` holds (numerators, denom)."""
    pidx = {c: i for i, c in enumerate(pivots)}
    for row in rows:
        if not row:
            continue
        used = [(pidx[c], x) for c, x in row.items() if c in pidx]
        if not used:
            return False
        L = 1
        for i, _ in used:
            L = lcm(L, cand[i][1])
        acc: dict = {}
        for i, x in used:
            num, den = cand[i]
            s = x * (L // den)
            for j, y in num.items():
                acc[j] = acc.get(j, 0) + s * y
        for j, x in row.items():
            if j in pidx:
                continue
            y = acc.get(j, 0) - L * x
            if y:
                acc[j] = y
            else:
                acc.pop(j, None)
        if any(acc.values()):
            return False
    return True


def _hadamard_bits(A: np.ndarray) -> int:
    """log2 upper bound for any maximal minor built from rows of ``A``."""
    total = 0
    for row in A:
        sq = sum(int(x) * int(x) for x in row if x)
        total += (sq.bit_length() + 1) // 2
    return total


def _lift_schedule(cap: int):
    k, out = 2, []
    while k < cap:
        out.append(k)
        k = max(k + 1, (k * 5) // 4)
    out.append(cap)
    return out


def _dixon_rref(rows: list, ncols: int, base) -> Rref | None:
    """Certified RREF by p-adic lifting on a pivot block chosen mod p.

    The pivot columns and an independent row set come from elimination
    mod p.  With B the pivot block and N the free-column block of those
    rows, the free part of the RREF is B^-1 N; it is lifted p-adically
    (one inverse mod p, then a matrix product per digit), reconstructed as
    rationals and certified against every input row.  Returns None when
    the prime was unlucky or the entries do not fit the int64 guard.
    """
    if base is None:
        return None
    p = _kernels.LIFT_PRIME
    r, piv = _kernels.eliminate_mod_p(base % p, p, reduced=False)
    r = int(r)
    if r == 0:
        return Rref(ncols, (), ())
    piv = tuple(int(c) for c in piv)
    pset = set(piv)
    free = [j for j in range(ncols) if j not in pset]
    if not free:
        return Rref(ncols, piv, tuple({c: 1} for c in piv))
    if len(free) < DIXON_MIN_FREE:
        return None
    sub = np.ascontiguousarray(base[:, list(piv)].T % p)
    r2, prow = _kernels.eliminate_mod_p(sub, p, reduced=False)
    if int(r2) != r:  # pragma: no cover - column rank equals row rank mod p
        return None
    sel = base[np.asarray(prow, dtype=np.int64)]
    B = np.ascontiguousarray(sel[:, list(piv)])
    N = np.ascontiguousarray(sel[:, free])
    bmax = int(np.abs(B).max())
    nmax = int(np.abs(N).max()) if N.size else 0
    if r * bmax * p >= 1 << 62 or nmax >= 1 << 61:
        return None
    Binv = _kernels.inverse_mod_p(B, p)
    if Binv is None:  # pragma: no cover - B is a pivot block mod p
        return None
    # numerators and the common denominator are minors of [B | N]
    bits = 2 * _hadamard_bits(sel) + 2
    cap = bits // (p.bit_length() - 1) + 2
    todo = set(_lift_schedule(cap))
    res = N.copy()
    acc = np.zeros(N.shape, dtype=object)
    pk = 1
    for it in range(1, cap + 1):
        X = _kernels.matmul_mod(Binv, res % p, p)
        res = _kernels.lift_step(res, B, X, p)
        acc = acc + X.astype(object) * pk
        pk *= p
        if it not in todo:
            continue
        probe = _kernels.rational_reconstruct(int(acc[-1, -1]), pk)
        if probe is None:
            continue
        cand = _reconstruct_big((acc, pk), free)
        if cand is not None and _certify(rows, piv, cand):
            return _rref_from_candidate(ncols, piv, cand)
    return None


def _rref_from_candidate(ncols, piv, cand) -> Rref:
    out = []
    for c, (num, den) in zip(piv, cand):
        row = {c: 1}
        for j, x in num.items():
            row[j] = _norm(Fraction(x, den))
        out.append(row)
    return Rref(ncols, piv, tuple(out))


# prime counts at which reconstruction is attempted
_RECON_SCHEDULE = frozenset((2, 3, 4, 6, 8, 12) + tuple(range(16, 257, 8)))


def _modular_rref(rows: list, ncols: int) -> Rref | None:
    """Certified RREF by CRT + rational reconstruction, or None.

    Residues on the free columns are combined incrementally; reconstruction
    and certification run only at the prime counts in ``_RECON_SCHEDULE``.
    A prime whose rank or pivots differ from the best seen so far is
    unlucky (or the earlier ones were) and restarts the accumulation.
    """
    base = _dense_int64(rows, ncols)
    out = _dixon_rref(rows, ncols, base)
    if out is not None:
        return out
    ref = None  # (rank, pivots)
    acc = None  # CRT residues on free columns (object array) and modulus
    mats, used = [], []
    for p in _kernels.PRIMES[:MAX_PRIMES]:
        r, piv, R = _modular_rref_image(rows, ncols, p, base)
        if ref is None or r > ref[0] or (r == ref[0] and piv < ref[1]):
            ref = (r, piv)
            mats, used, acc = [], [], None
        elif (r, piv) != ref:
            continue
        rank, piv = ref
        if rank == 0:
            return Rref(ncols, (), ())
        pset = set(piv)
        free = [j for j in range(ncols) if j not in pset]
        if not free:
            return Rref(ncols, piv, tuple({c: 1} for c in piv))
        mats.append(R)
        used.append(p)
        if len(used) > 2:
            acc = _crt_extend(acc, mats, used, free)
            mats = mats[-1:]
        if len(used) not in _RECON_SCHEDULE:
            continue
        if len(used) == 2:
            cand = _reconstruct_two(mats, used, free)
        else:
            cand = _reconstruct_big(acc, free)
        if cand is None or not _certify(rows, piv, cand):
            continue
        return _rref_from_candidate(ncols, piv, cand)
    return None


def _crt_extend(acc, mats, primes, free):
    """Fold the newest residue matrices into the running CRT state."""
    fidx = np.asarray(free, dtype=np.int64)
    if acc is None:
        vals, M = mats[0][:, fidx].astype(object), primes[0]
        todo = list(zip(mats[1:], primes[1 : len(mats)]))
    else:
        vals, M = acc
        todo = [(mats[-1], primes[-1])]
    for R, p in todo:
        new = R[:, fidx].astype(object)
        inv = pow(M % p, -1, p)
        vals = vals + M * (((new - vals) % p) * inv % p)
        M *= p
    return vals, M


def _reconstruct_two(mats: list, primes: list, free: list):
    fidx = np.asarray(free, dtype=np.int64)
    a1 = mats[0][:, fidx].ravel()
    a2 = mats[1][:, fidx].ravel()
    u = _kernels.crt_pair(a1, primes[0], a2, primes[1])
    num, den, ok = _kernels.ratrecon_array(u, primes[0] * primes[1])
    if not ok.all():
        return None
    num = num.reshape(-1, len(free))
    den = den.reshape(-1, len(free))
    return _collect(num.tolist(), den.tolist(), free)


def _reconstruct_big(acc, free: list):
    """Rational reconstruction with a running common denominator.

    RREF entries share the pivot minor as a denominator, so once L is known
    most entries reconstruct as (u*L mod M) / L without a Euclid run.
    """
    vals, M = acc
    bound = _kernels._isqrt_half(M)
    half = M // 2
    L = 1
    nums, dens = [], []
    for row in vals:
        rn, rd = [], []
        for u in row:
            u = int(u)
            w = u * L % M
            if w > half:
                w -= M
            if -bound <= w <= bound:
                rn.append(w)
                rd.append(L)
                continue
            res = _kernels.rational_reconstruct(u, M, bound)
            if res is None:
                return None
            rn.append(res[0])
            rd.append(res[1])
            L = lcm(L, res[1])
            if L > bound:
                L = 1
        nums.append(rn)
        dens.append(rd)
    return _collect(nums, dens, free)


def _collect(nums, dens, free):
    out = []
    for rn, rd in zip(nums, dens):
        L = 1
        for d in rd:
            if d != 1:
                L = lcm(L, d)
        row = {}
        for j, n, d in zip(free, rn, rd):
            if n:
                row[j] = n * (L // d)
        out.append((row, L))
    return out


# ---------------------------------------------------------------------------
# public interface
# ---------------------------------------------------------------------------


def _use_modular(nrows: int, ncols: int, prepass: bool | None) -> bool:
    if nrows * ncols > MAX_DENSE_ENTRIES:
        raise BudgetExceeded(f"a {nrows} x {ncols} elimination exceeds the dense memory budget")
    if prepass is None:
        prepass = nrows * ncols >= MODULAR_THRESHOLD
    return bool(prepass) and nrows > 0 and ncols > 0


def exact_rref(M: ExactMatrix) -> Rref:
    """RREF of the row space of ``M`` by fraction-free elimination only."""
    rows = integer_rows(M)
    pivots, data = _back_substitute(_echelon(rows, M.cols))
    return Rref(M.cols, pivots, data)


def rref(M: ExactMatrix, prepass: bool | None = None) -> Rref:
    """Exact RREF of the row space of ``M``."""
    if _use_modular(M.rows, M.cols, prepass):
        rows = [r for r in integer_rows(M) if r]
        if not rows:
            return Rref(M.cols, (), ())
        out = _modular_rref(rows, M.cols)
        if out is not None:
            return out
        log.info("modular reconstruction did not certify for %s; using fraction-free", M)
    return exact_rref(M)


def rank(M: ExactMatrix, prepass: bool | None = None) -> int:
    """Exact rank of ``M``.

    With the modular pre-pass, a full-rank result mod p is returned
    directly (a nonzero minor mod p is nonzero over Q).  Otherwise the rank
    is certified by a reconstructed echelon form on whichever of ``M`` and
    its transpose has the smaller kernel, or by fraction-free elimination.
    """
    if not _use_modular(M.rows, M.cols, prepass):
        rows = integer_rows(M)
        return len(_echelon(rows, M.cols))
    rows = [r for r in integer_rows(M) if r]
    if not rows:
        return 0
    r_p, _ = _modular_rank(rows, M.cols, _kernels.PRIMES[0])
    if r_p == min(len(rows), M.cols):
        return r_p
    if M.cols - r_p <= len(rows) - r_p:
        cand = _modular_rref(rows, M.cols)
    else:
        T = M.transpose()
        cand = _modular_rref([r for r in integer_rows(T) if r], T.cols)
    if cand is not None:
        if cand.rank < r_p:  # pragma: no cover - impossible for a certified form
            raise ArithmeticError("certified rank below modular rank")
        return cand.rank
    log.info("modular certification failed for %s; using fraction-free", M)
    return len(_echelon(integer_rows(M), M.cols))


def kernel_basis(M: ExactMatrix, prepass: bool | None = None) -> ExactMatrix:
    """Rows span {v : M v = 0}."""
    return rref(M, prepass).kernel()


def row_basis(M: ExactMatrix, prepass: bool | None = None) -> ExactMatrix:
    return rref(M, prepass).as_matrix()


def image_basis(M: ExactMatrix, prepass: bool | None = None) -> ExactMatrix:
    """Rows form a basis of the column space of ``M``."""
    return rref(M.transpose(), prepass).as_matrix()


def same_row_space(A: ExactMatrix, B: ExactMatrix) -> bool:
    """Exact subspace equality via ranks of the stacked matrix."""
    ra, rb = rank(A), rank(B)
    return ra == rb == rank(A.vstack(B))
