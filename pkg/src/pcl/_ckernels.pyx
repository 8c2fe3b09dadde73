# cython: language_level=3
"""Compiled hot kernels; signatures mirror :mod:`pcl._pykernels`."""
from libc.math cimport log

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int32_t i32
ctypedef cnp.int64_t i64


def sieve(Py_ssize_t limit):
    """Linear sieve: smallest prime factor plus sigma0/sigma1 in O(limit)."""
    cdef cnp.ndarray[i32] spf_a = np.zeros(limit + 1, dtype=np.int32)
    cdef cnp.ndarray[i32] s0_a = np.zeros(limit + 1, dtype=np.int32)
    cdef cnp.ndarray[i64] s1_a = np.zeros(limit + 1, dtype=np.int64)
    cdef cnp.ndarray[i32] pw_a = np.zeros(limit + 1, dtype=np.int32)
    cdef Py_ssize_t bound = limit + 1
    if limit >= 17:
        bound = <Py_ssize_t>(1.26 * limit / log(<double>limit)) + 16
    cdef cnp.ndarray[i32] primes_a = np.empty(bound, dtype=np.int32)
    cdef i32[::1] spf = spf_a
    cdef i32[::1] s0 = s0_a
    cdef i64[::1] s1 = s1_a
    cdef i32[::1] pw = pw_a
    cdef i32[::1] primes = primes_a
    cdef Py_ssize_t i, j, nprimes = 0, rest
    cdef i64 ip, p
    if limit < 1:
        return spf_a, s0_a, s1_a
    s0[1] = 1
    s1[1] = 1
    pw[1] = 1
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = <i32>i
            primes[nprimes] = <i32>i
            nprimes += 1
            s0[i] = 2
            s1[i] = i + 1
            pw[i] = <i32>i
        for j in range(nprimes):
            p = primes[j]
            ip = i * p
            if p > spf[i] or ip > limit:
                break
            spf[ip] = <i32>p
            if p == spf[i]:
                pw[ip] = <i32>(pw[i] * p)
                rest = i // pw[i]
                s0[ip] = (s0[i] // s0[rest] + 1) * s0[rest]
                s1[ip] = (s1[i] // s1[rest] * p + 1) * s1[rest]
            else:
                pw[ip] = <i32>p
                s0[ip] = s0[i] * 2
                s1[ip] = s1[i] * (p + 1)
    return spf_a, s0_a, s1_a


def hooley_sums(sigma0, Py_ssize_t limit, Py_ssize_t block=4096):
    # Output is built one cache-sized tile at a time; for each k the tile gets a
    # contiguous shifted slice of sigma0 added, which the compiler vectorizes.
    # int32 tiles suffice: S(N) < sqrt(N) * max sigma0 stays far below 2**31.
    cdef const i32[::1] s0 = np.ascontiguousarray(sigma0, dtype=np.int32)
    cdef cnp.ndarray[i64] out_a = np.zeros(limit + 1, dtype=np.int64)
    cdef i64[::1] out = out_a
    cdef i32[::1] tile_a = np.zeros(block, dtype=np.int32)
    cdef i32* tile = &tile_a[0]
    cdef const i32* src = &s0[0]
    cdef Py_ssize_t lo = 2, hi, n, k, sq, start
    while lo <= limit:
        hi = min(lo + block, limit + 1)
        for n in range(hi - lo):
            tile[n] = 0
        k = 1
        while k * k < hi - 1:
            sq = k * k
            start = lo if lo > sq else sq + 1
            for n in range(start, hi):
                tile[n - lo] += src[n - sq]
            k += 1
        for n in range(lo, hi):
            out[n] = tile[n - lo]
        lo = hi
    return out_a


def divisor_convolution(sigma0, Py_ssize_t n):
    cdef const i32[::1] s0 = np.ascontiguousarray(sigma0, dtype=np.int32)
    cdef Py_ssize_t k
    cdef i64 acc = 0
    if n < 2:
        return 0
    for k in range(1, (n + 1) // 2):
        acc += <i64>s0[k] * s0[n - k]
    acc *= 2
    if n % 2 == 0:
        acc += <i64>s0[n // 2] * s0[n // 2]
    return acc


def residue_failures(s_mod4, Py_ssize_t a, Py_ssize_t b, Py_ssize_t n_max):
    cdef const cnp.int8_t[::1] s = np.ascontiguousarray(s_mod4, dtype=np.int8)
    cdef Py_ssize_t n, big
    out = []
    for n in range(n_max + 1):
        big = a * n + b
        if big >= 2 and s[big] != 0:
            out.append(big)
    return np.asarray(out, dtype=np.int64)


def first_failure(s_mod4, Py_ssize_t a, Py_ssize_t b, Py_ssize_t n_limit, Py_ssize_t start_n=0):
    cdef const cnp.int8_t[::1] s = np.ascontiguousarray(s_mod4, dtype=np.int8)
    cdef Py_ssize_t n = start_n, big
    while True:
        big = a * n + b
        if big > n_limit:
            return -1, n - 1
        if big >= 2 and s[big] != 0:
            return big, n
        n += 1


def glued_counts(Py_ssize_t n):
    """Enumerate the glued multiset for ``n`` (see the fallback for the contract)."""
    cdef Py_ssize_t m = n + 1
    cdef Py_ssize_t r, c, u, v, i, j, lo_i, cnt = 0, pairs = 0
    cdef Py_ssize_t xr, xc, yr, yc, t
    cdef i64 kx, ky, kxt, kyt
    # start[a]..start[a+1] indexes the row<=col rectangles of area a
    cdef cnp.ndarray[i64] start_a = np.zeros(n + 2, dtype=np.int64)
    for r in range(1, n + 1):
        if r * r > n:
            break
        for c in range(r, n // r + 1):
            start_a[r * c + 1] += 1
    start_a = np.cumsum(start_a)
    cdef i64[::1] start = start_a
    cdef cnp.ndarray[i64] rect_a = np.zeros(start[n + 1], dtype=np.int64)
    cdef i64[::1] rect = rect_a
    cdef cnp.ndarray[i64] fill_a = start_a[:n + 1].copy()
    cdef i64[::1] fill = fill_a
    for r in range(1, n + 1):
        if r * r > n:
            break
        for c in range(r, n // r + 1):
            rect[fill[r * c]] = r * m + c
            fill[r * c] += 1
    for u in range(1, n // 2 + 1):
        v = n - u
        if u == v:
            t = start[u + 1] - start[u]
            pairs += t * (t + 1) // 2
        else:
            pairs += (start[u + 1] - start[u]) * (start[v + 1] - start[v])
    cdef cnp.ndarray[i64] keys_a = np.empty(4 * pairs, dtype=np.int64)
    cdef i64[::1] keys = keys_a
    cdef i64 mm = <i64>m * m
    for u in range(1, n // 2 + 1):
        v = n - u
        for i in range(start[u], start[u + 1]):
            kx = rect[i]
            kxt = (kx % m) * m + kx // m
            lo_i = i if u == v else start[v]
            for j in range(lo_i, start[v + 1]):
                ky = rect[j]
                kyt = (ky % m) * m + ky // m
                keys[cnt] = kx * mm + ky if kx <= ky else ky * mm + kx
                keys[cnt + 1] = kx * mm + kyt if kx <= kyt else kyt * mm + kx
                keys[cnt + 2] = kxt * mm + ky if kxt <= ky else ky * mm + kxt
                keys[cnt + 3] = kxt * mm + kyt if kxt <= kyt else kyt * mm + kxt
                cnt += 4
    keys_a.sort()
    cdef i64 b = 0, cc = 0, d = 0, e = 0, prev = -1, key, p, q
    for i in range(cnt):
        key = keys[i]
        if key == prev:
            continue
        prev = key
        p = key // mm
        q = key % mm
        xr = p // m
        xc = p % m
        yr = q // m
        yc = q % m
        if xc != yc:
            b += 1
        else:
            d += 1
        if xr == xc or yr == yc:
            cc += 1
        if xr == yc and xc == yr:
            e += 1
    return cnt, b, cc, d, e, pairs
