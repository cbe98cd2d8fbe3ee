"""Modular elimination kernels.

Every kernel has a numba ``@njit`` version and a pure-numpy version with the
same signature.  The numba path is used when numba imports and the
environment variable ``ADETORELLI_DISABLE_NUMBA`` is unset or "0"; set it to
"1" to force the numpy path (handy for debugging and for the benchmark).

Arithmetic is over Z/p with p < 2**31 so every product fits in int64.
"""

import os
from math import gcd, isqrt

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f


def numba_enabled() -> bool:
    return NUMBA_AVAILABLE and os.environ.get("ADETORELLI_DISABLE_NUMBA", "0") in ("", "0")


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.2e9 (bases 2, 3, 5, 7)."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _largest_primes(below: int, count: int) -> tuple:
    out = []
    n = below - 1
    while len(out) < count:
        if _is_prime(n):
            out.append(n)
        n -= 1
    return tuple(out)


# 31-bit primes, largest first.  Fixed so results are reproducible.
PRIMES = _largest_primes(2**31, 256)
# p-adic lifting prime: products of two residues stay below 2**50, so
# thousands of them can be summed in int64 before reducing
LIFT_PRIME = _largest_primes(2**25, 1)[0]


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def _inv_mod_nb(a, p):
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    if t < 0:
        t += p
    return t


@njit(cache=True)
def _eliminate_nb(A, p, reduced):
    nrows, ncols = A.shape
    piv = np.empty(min(nrows, ncols), dtype=np.int64)
    nz = np.empty(ncols, dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = -1
        for i in range(r, nrows):
            if A[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(c, ncols):
                tmp = A[k, j]
                A[k, j] = A[r, j]
                A[r, j] = tmp
        inv = _inv_mod_nb(A[r, c], p)
        cnt = 0
        for j in range(c, ncols):
            if A[r, j] != 0:
                A[r, j] = (A[r, j] * inv) % p
                nz[cnt] = j
                cnt += 1
        start = 0 if reduced else r + 1
        for i in range(start, nrows):
            if i == r:
                continue
            f = A[i, c]
            if f == 0:
                continue
            for t in range(cnt):
                j = nz[t]
                A[i, j] = (A[i, j] - f * A[r, j]) % p
        piv[r] = c
        r += 1
    return r, piv[:r].copy()


@njit(cache=True)
def _ratrecon_nb(u, m, bound, num, den, ok):
    for idx in range(u.shape[0]):
        r0, r1 = m, u[idx] % m
        t0, t1 = 0, 1
        while r1 > bound:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            t0, t1 = t1, t0 - q * t1
        if t1 == 0 or abs(t1) > bound:
            ok[idx] = False
            continue
        if t1 < 0:
            t1 = -t1
            r1 = -r1
        # gcd(r1, t1) must be 1 for a valid reconstruction
        a, b = abs(r1), t1
        while b != 0:
            a, b = b, a % b
        if a != 1 and r1 != 0:
            ok[idx] = False
            continue
        if r1 == 0:
            t1 = 1
        num[idx] = r1
        den[idx] = t1
        ok[idx] = True


@njit(cache=True)
def _crt2_nb(a1, p1, a2, p2):
    inv = _inv_mod_nb(p1 % p2, p2)
    out = np.empty(a1.shape[0], dtype=np.int64)
    for i in range(a1.shape[0]):
        k = ((a2[i] - a1[i]) % p2) * inv % p2
        out[i] = a1[i] + p1 * k
    return out


@njit(cache=True)
def _matmul_mod_nb(A, B, p, chunk):
    # up to ``chunk`` products are summed before reducing, so small primes
    # skip most of the modulo operations
    n, k = A.shape
    m = B.shape[1]
    C = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        cnt = 0
        for t in range(k):
            a = A[i, t]
            if a == 0:
                continue
            for j in range(m):
                C[i, j] += a * B[t, j]
            cnt += 1
            if cnt == chunk:
                for j in range(m):
                    C[i, j] %= p
                cnt = 0
        for j in range(m):
            C[i, j] %= p
    return C


@njit(cache=True)
def _lift_step_nb(res, B, X, p):
    n, k = B.shape
    m = X.shape[1]
    out = res.copy()
    for i in range(n):
        for t in range(k):
            b = B[i, t]
            if b == 0:
                continue
            for j in range(m):
                out[i, j] -= b * X[t, j]
    return out // p


# ---------------------------------------------------------------------------
# numpy fallbacks
# ---------------------------------------------------------------------------


def _matmul_mod_np(A, B, p):
    """A @ B mod p without int64 overflow: 16-bit split of B, 64-term chunks."""
    lo = B & 0xFFFF
    hi = B >> 16
    C = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(0, A.shape[1], 64):
        a = A[:, s : s + 64]
        C = (C + (a @ lo[s : s + 64]) % p + ((a @ hi[s : s + 64]) % p) * 65536) % p
    return C


def _eliminate_np(A, p, reduced):
    nrows, ncols = A.shape
    piv = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = A[r:, c]
        hits = np.flatnonzero(col)
        if hits.size == 0:
            continue
        k = r + int(hits[0])
        if k != r:
            A[[k, r], c:] = A[[r, k], c:]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = (A[r, c:] * inv) % p
        if reduced:
            targets = np.flatnonzero(A[:, c])
            targets = targets[targets != r]
        else:
            targets = r + 1 + np.flatnonzero(A[r + 1 :, c])
        if targets.size:
            f = A[targets, c][:, None]
            A[targets, c:] = (A[targets, c:] - f * A[r, c:][None, :]) % p
        piv.append(c)
        r += 1
    return r, np.asarray(piv, dtype=np.int64)


def _ratrecon_np(u, m, bound, num, den, ok):
    for idx in range(u.shape[0]):
        res = rational_reconstruct(int(u[idx]), int(m), int(bound))
        if res is None:
            ok[idx] = False
        else:
            num[idx], den[idx] = res
            ok[idx] = True


def _crt2_np(a1, p1, a2, p2):
    inv = pow(p1 % p2, -1, p2)
    k = ((a2 - a1) % p2) * inv % p2
    return a1 + p1 * k


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def eliminate_mod_p(A: np.ndarray, p: int, reduced: bool = False):
    """Row-reduce ``A`` (int64, entries in [0, p)) in place.

    Returns ``(rank, pivot_columns)``.  With ``reduced=True`` the result is
    the reduced row echelon form with unit pivots; otherwise rows below
    each pivot are cleared only.
    """
    if numba_enabled():
        return _eliminate_nb(A, np.int64(p), reduced)
    return _eliminate_np(A, p, reduced)


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """(A @ B) mod p for int64 arrays with entries in [0, p)."""
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    if numba_enabled():
        chunk = max(1, ((1 << 63) - 1) // ((p - 1) * (p - 1)) - 1)
        return _matmul_mod_nb(A, B, np.int64(p), np.int64(chunk))
    return _matmul_mod_np(A, B, p)


def lift_step(res: np.ndarray, B: np.ndarray, X: np.ndarray, p: int) -> np.ndarray:
    """(res - B @ X) / p, exact; the caller guarantees no int64 overflow."""
    if numba_enabled():
        return _lift_step_nb(res, B, X, np.int64(p))
    return (res - B @ X) // p


def inverse_mod_p(B: np.ndarray, p: int):
    """Inverse of a square matrix mod p, or None if it is singular mod p."""
    n = B.shape[0]
    aug = np.zeros((n, 2 * n), dtype=np.int64)
    aug[:, :n] = B % p
    aug[np.arange(n), n + np.arange(n)] = 1
    r, piv = eliminate_mod_p(aug, p, reduced=True)
    if r != n or int(piv[-1]) != n - 1:
        return None
    return aug[:, n:].copy()


def crt_pair(a1, p1, a2, p2):
    """Combine residue arrays modulo two 31-bit primes into int64 residues."""
    if numba_enabled():
        return _crt2_nb(a1, np.int64(p1), a2, np.int64(p2))
    return _crt2_np(a1, p1, a2, p2)


def ratrecon_array(u: np.ndarray, m: int):
    """Vectorised rational reconstruction for a modulus below 2**62."""
    bound = _isqrt_half(m)
    n = u.shape[0]
    num = np.zeros(n, dtype=np.int64)
    den = np.ones(n, dtype=np.int64)
    ok = np.zeros(n, dtype=np.bool_)
    if numba_enabled():
        _ratrecon_nb(u, np.int64(m), np.int64(bound), num, den, ok)
    else:
        _ratrecon_np(u, m, bound, num, den, ok)
    return num, den, ok


def rational_reconstruct(u: int, m: int, bound: int | None = None):
    """Find a/b = u (mod m) with |a|, b <= bound; None when no such pair."""
    if bound is None:
        bound = _isqrt_half(m)
    r0, r1 = m, u % m
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    if t1 < 0:
        t1, r1 = -t1, -r1
    if r1 == 0:
        return 0, 1
    if gcd(r1, t1) != 1:
        return None
    return r1, t1


def _isqrt_half(m: int) -> int:
    return isqrt(m // 2)
