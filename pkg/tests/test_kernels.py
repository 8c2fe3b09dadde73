import numpy as np
import pytest

from pcl import kernels

from .oracles import harmonic_sieve, hooley_naive


@pytest.mark.parametrize("limit", [1, 2, 6, 14, 97, 1000])
def test_sieve_matches_harmonic_oracle(backend, limit):
    spf, s0, s1 = backend.sieve(limit)
    o0, o1 = harmonic_sieve(limit)
    assert s0.tolist()[1:] == o0[1:]
    assert s1.tolist()[1:] == o1[1:]
    for n in range(2, limit + 1):
        p = int(spf[n])
        assert n % p == 0 and all(p % q for q in range(2, p))


def test_backends_agree_on_sieve():
    pytest.importorskip("pcl._ckernels")
    from pcl import _ckernels, _pykernels

    a, b = _pykernels.sieve(200_000), _ckernels.sieve(200_000)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)


def test_hooley_sums(backend):
    _, s0, _ = backend.sieve(400)
    out = backend.hooley_sums(s0, 400)
    assert out[0] == out[1] == 0
    assert [int(out[n]) for n in range(2, 401)] == [hooley_naive(n) for n in range(2, 401)]


@pytest.mark.parametrize("n,expected", [(2, 1), (6, 20), (14, 108)])
def test_divisor_convolution(backend, n, expected):
    _, s0, _ = backend.sieve(20)
    assert backend.divisor_convolution(s0, n) == expected


def test_convolution_symmetric(backend):
    _, s0, _ = backend.sieve(3000)
    for n in (2, 3, 999, 1000, 2999):
        direct = sum(int(s0[k]) * int(s0[n - k]) for k in range(1, n))
        backwards = sum(int(s0[n - k]) * int(s0[k]) for k in range(n - 1, 0, -1))
        assert backend.divisor_convolution(s0, n) == direct == backwards


def test_glued_counts_small(backend):
    assert backend.glued_counts(2) == (4, 0, 1, 1, 1, 1)
    assert backend.glued_counts(6) == (16, 6, 4, 5, 1, 4)
    assert backend.glued_counts(14) == (64, 44, 8, 11, 1, 16)


def test_glued_counts_backends_agree():
    pytest.importorskip("pcl._ckernels")
    from pcl import _ckernels, _pykernels

    for n in list(range(2, 120)) + [997, 1000, 1998]:
        assert tuple(_pykernels.glued_counts(n)) == tuple(int(v) for v in _ckernels.glued_counts(n))


def test_scan_kernels(backend):
    _, s0, _ = backend.sieve(2000)
    s4 = (backend.hooley_sums(s0, 2000) % 4).astype(np.int8)
    # (2,0) dies at N=2 (S=1); (3,1) at N=4 (S=sigma0(3)=2)
    assert backend.first_failure(s4, 2, 0, 100) == (2, 1)
    assert backend.first_failure(s4, 3, 1, 100) == (4, 1)
    assert backend.first_failure(s4, 16, 14, 2000) == (-1, (2000 - 14) // 16)
    # resuming mid-family continues from start_n
    n = 5
    while not s4[2 * n]:
        n += 1
    assert backend.first_failure(s4, 2, 0, 100, 5) == (2 * n, n)
    assert backend.first_failure(s4, 50, 49, 10) == (-1, -1)
    fails = backend.residue_failures(s4, 3, 2, 600)
    brute = [3 * n + 2 for n in range(601) if 3 * n + 2 <= 2000 and s4[3 * n + 2]]
    assert fails.tolist() == brute


def test_backend_selected():
    assert kernels.BACKEND in {"python", "cython"}
