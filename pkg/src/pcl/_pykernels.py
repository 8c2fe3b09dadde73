"""Numpy implementations of the hot kernels.

These are the reference fallback for :mod:`pcl._ckernels` and share its
signatures exactly. Arrays are indexed by value, so index 0 is a dummy slot.
"""
from __future__ import annotations

from collections import Counter
from math import isqrt

import numpy as np


def sieve(limit: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(spf, sigma0, sigma1)`` for ``1..limit``.

    Divisor functions come from pairing each divisor ``d <= sqrt(n)`` with
    ``n // d``, so the Python-level loop only runs ``isqrt(limit)`` times.
    """
    spf = np.zeros(limit + 1, dtype=np.int32)
    sigma0 = np.zeros(limit + 1, dtype=np.int32)
    sigma1 = np.zeros(limit + 1, dtype=np.int64)
    root = isqrt(limit)
    for d in range(1, root + 1):
        idx = np.arange(d * d, limit + 1, d, dtype=np.int64)
        sigma0[idx] += 2
        sigma1[idx] += d + idx // d
        sigma0[d * d] -= 1
        sigma1[d * d] -= d
    for p in range(2, root + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = spf == 0
    rest[:2] = False
    spf[rest] = np.nonzero(rest)[0]
    return spf, sigma0, sigma1


def hooley_sums(sigma0: np.ndarray, limit: int) -> np.ndarray:
    """``out[N] = sum(sigma0[N - k*k] for 1 <= k, k*k < N)`` for ``N <= limit``."""
    out = np.zeros(limit + 1, dtype=np.int64)
    k = 1
    while k * k < limit:
        sq = k * k
        out[sq + 1 : limit + 1] += sigma0[1 : limit + 1 - sq]
        k += 1
    return out


def divisor_convolution(sigma0: np.ndarray, n: int) -> int:
    if n < 2:
        return 0
    a = sigma0[1:n].astype(np.int64)
    return int(np.dot(a, a[::-1]))


def residue_failures(s_mod4: np.ndarray, a: int, b: int, n_max: int) -> np.ndarray:
    """All ``N = a*n + b`` (``0 <= n <= n_max``, ``N >= 2``) with ``s_mod4[N] != 0``."""
    ns = np.arange(b, a * n_max + b + 1, a, dtype=np.int64)
    ns = ns[ns >= 2]
    return ns[s_mod4[ns] != 0]


def first_failure(s_mod4: np.ndarray, a: int, b: int, n_limit: int, start_n: int = 0) -> tuple[int, int]:
    """Scan ``N = a*n + b <= n_limit`` from ``n = start_n`` until the first failure.

    Returns ``(failing_N or -1, last n examined)``; last n is ``start_n - 1``
    if nothing was in range.
    """
    top = (n_limit - b) // a if n_limit >= b else -1
    if top < start_n:
        return -1, start_n - 1
    ns = np.arange(a * start_n + b, a * top + b + 1, a, dtype=np.int64)
    bad = np.flatnonzero((ns >= 2) & (s_mod4[ns] != 0))
    if bad.size:
        n_fail = int(ns[bad[0]])
        return n_fail, (n_fail - b) // a
    return -1, top


def _area_rectangles(n: int) -> list[list[tuple[int, int]]]:
    rects: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
    for r in range(1, isqrt(n) + 1):
        for c in range(r, n // r + 1):
            rects[r * c].append((r, c))
    return rects


def glued_counts(n: int) -> tuple[int, int, int, int, int, int]:
    """Enumerate the glued multiset for ``n`` and count it by set membership.

    Returns ``(a, b, c, d, e, pairs)``: multiset size, the number of distinct
    elements with different column counts, containing a square, with equal
    column counts, and of the form ``{X, X^T}``, then the canonical pair count.
    """
    rects = _area_rectangles(n)
    seen: Counter = Counter()
    pairs = 0
    for u in range(1, n // 2 + 1):
        left, right = rects[u], rects[n - u]
        for i, x in enumerate(left):
            for y in (right[i:] if u == n - u else right):
                pairs += 1
                xt, yt = (x[1], x[0]), (y[1], y[0])
                for p, q in ((x, y), (x, yt), (xt, y), (xt, yt)):
                    seen[(p, q) if p <= q else (q, p)] += 1
    b = c = d = e = 0
    for (p, q) in seen:
        if p[1] != q[1]:
            b += 1
        else:
            d += 1
        if p[0] == p[1] or q[0] == q[1]:
            c += 1
        if p == (q[1], q[0]):
            e += 1
    return sum(seen.values()), b, c, d, e, pairs
