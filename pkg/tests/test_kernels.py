"""The numba kernels and their numpy fallbacks must agree bit for bit."""

import numpy as np
import pytest

from adetorelli import _kernels, linalg
from adetorelli.matrix import ExactMatrix

P = _kernels.PRIMES[0]


def random_mod(rng, shape, p=P, density=0.4):
    A = rng.integers(0, p, size=shape, dtype=np.int64)
    A[rng.random(shape) > density] = 0
    return A


@pytest.fixture(params=["numba", "numpy"])
def path(request, monkeypatch):
    if request.param == "numpy":
        monkeypatch.setenv("ADETORELLI_DISABLE_NUMBA", "1")
    else:
        monkeypatch.setenv("ADETORELLI_DISABLE_NUMBA", "0")
        if not _kernels.NUMBA_AVAILABLE:
            pytest.skip("numba not installed")
    return request.param


def test_env_flag(path):
    assert _kernels.numba_enabled() == (path == "numba")


@pytest.mark.parametrize("reduced", [False, True])
def test_eliminate_paths_agree(reduced, monkeypatch):
    rng = np.random.default_rng(1)
    for shape in [(5, 9), (30, 20), (40, 40)]:
        A = random_mod(rng, shape)
        A[3] = (2 * A[1] + A[2]) % P  # force a dependency
        monkeypatch.setenv("ADETORELLI_DISABLE_NUMBA", "0")
        a = A.copy()
        ra, pa = _kernels.eliminate_mod_p(a, P, reduced)
        monkeypatch.setenv("ADETORELLI_DISABLE_NUMBA", "1")
        b = A.copy()
        rb, pb = _kernels.eliminate_mod_p(b, P, reduced)
        assert ra == rb and list(pa) == list(pb)
        assert np.array_equal(a[:ra], b[:rb])


def test_matmul_mod_matches_object_arithmetic(path):
    rng = np.random.default_rng(2)
    for p in (P, _kernels.LIFT_PRIME):
        A = random_mod(rng, (17, 70), p)
        B = random_mod(rng, (70, 9), p)
        ref = (A.astype(object) @ B.astype(object)) % p
        assert np.array_equal(_kernels.matmul_mod(A, B, p), ref.astype(np.int64))


def test_inverse_mod_p(path):
    rng = np.random.default_rng(3)
    B = random_mod(rng, (8, 8), density=1.0)
    inv = _kernels.inverse_mod_p(B, P)
    eye = (B.astype(object) @ inv.astype(object)) % P
    assert np.array_equal(eye.astype(np.int64), np.eye(8, dtype=np.int64))
    assert _kernels.inverse_mod_p(np.zeros((3, 3), dtype=np.int64), P) is None


def test_crt_and_reconstruction(path):
    p1, p2 = _kernels.PRIMES[:2]
    vals = [(3, 7), (-5, 11), (0, 1), (123457, 789)]
    u1 = np.array([n * pow(d, -1, p1) % p1 for n, d in vals], dtype=np.int64)
    u2 = np.array([n * pow(d, -1, p2) % p2 for n, d in vals], dtype=np.int64)
    u = _kernels.crt_pair(u1, p1, u2, p2)
    num, den, ok = _kernels.ratrecon_array(u, p1 * p2)
    assert ok.all()
    assert list(zip(num.tolist(), den.tolist())) == vals


def test_rational_reconstruct_bigint():
    m = _kernels.PRIMES[0] * _kernels.PRIMES[1] * _kernels.PRIMES[2]
    a, b = -10**12 + 7, 10**12 + 39
    u = a * pow(b, -1, m) % m
    assert _kernels.rational_reconstruct(u, m) == (a, b)


def test_rank_same_on_both_paths(path):
    rng = np.random.default_rng(4)
    dense = rng.integers(-3, 4, size=(60, 50))
    dense[:, 10] = dense[:, 3] - dense[:, 4]
    M = ExactMatrix.from_dense(dense.tolist())
    assert linalg.rank(M, prepass=True) == linalg.rank(M, prepass=False) == 49


def test_primes_are_prime_and_distinct():
    assert len(set(_kernels.PRIMES)) == len(_kernels.PRIMES)
    for p in _kernels.PRIMES[:5] + (_kernels.LIFT_PRIME,):
        assert all(p % q for q in range(2, 2000))
