"""Partitions with a prescribed number of distinct part sizes."""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from . import kernels
from .arith import INT64_MAX, SieveTable
from .errors import ArithmeticOverflow, DomainError, IntegrityError, ResourceError

BRUTE_FORCE_BOUND = 5000
MAX_CONVOLUTION = 10**6


@dataclass(frozen=True, order=True)
class PartitionTwoSizes:
    """``count_larger`` copies of ``larger`` plus ``count_smaller`` copies of ``smaller``."""

    larger: int
    smaller: int
    count_larger: int
    count_smaller: int

    def __post_init__(self):
        if not self.larger > self.smaller >= 1:
            raise DomainError(f"need larger > smaller >= 1, got {self.larger}, {self.smaller}")
        if self.count_larger < 1 or self.count_smaller < 1:
            raise DomainError("both part sizes must occur at least once")

    @property
    def total(self) -> int:
        return self.larger * self.count_larger + self.smaller * self.count_smaller

    def parts(self) -> tuple[int, ...]:
        return (self.larger,) * self.count_larger + (self.smaller,) * self.count_smaller


def _check_bound(n: int, bound: int) -> None:
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    if n > bound:
        raise ResourceError(f"N={n} exceeds the brute-force bound {bound}")


def enumerate_two_size_partitions(n: int, bound: int = BRUTE_FORCE_BOUND) -> list[PartitionTwoSizes]:
    """All partitions of ``n`` with exactly two part sizes, sorted by (larger, smaller, count_larger)."""
    _check_bound(n, bound)
    out = []
    for n1 in range(2, n):
        for n2 in range(1, n1):
            for k1 in range(1, (n - n2) // n1 + 1):
                rest = n - k1 * n1
                if rest % n2 == 0:
                    out.append(PartitionTwoSizes(n1, n2, k1, rest // n2))
    return out


def _count_exact(remaining: int, below: int, sizes_left: int) -> int:
    # partitions of `remaining` into exactly `sizes_left` distinct values, all < below
    if sizes_left == 0:
        return 1 if remaining == 0 else 0
    if sizes_left == 1:
        # one value v < below repeated remaining // v times: v must divide remaining
        total = 0
        for d in range(1, isqrt(remaining) + 1):
            if remaining % d == 0:
                total += d < below
                if d * d != remaining:
                    total += remaining // d < below
        return total
    total = 0
    # the other sizes_left - 1 values need at least 1 + 2 + ... cells
    floor_rest = (sizes_left - 1) * sizes_left // 2
    for v in range(min(below - 1, remaining - floor_rest), sizes_left - 1, -1):
        for m in range(1, (remaining - floor_rest) // v + 1):
            total += _count_exact(remaining - m * v, v, sizes_left - 1)
    return total


def nu_k_bruteforce(n: int, k: int, bound: int = BRUTE_FORCE_BOUND) -> int:
    """Number of partitions of ``n`` with exactly ``k`` distinct part sizes.

    Walks every choice of distinct values (descending) and multiplicities, so
    each counted partition is visited exactly once.
    """
    _check_bound(n, bound)
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    return _count_exact(n, n + 1, k)


def divisor_convolution(n: int, table: SieveTable) -> int:
    """``sum(sigma0(k) * sigma0(n - k) for k in 1..n-1)``."""
    if n < 2:
        raise DomainError(f"convolution needs N >= 2, got {n}")
    if n > MAX_CONVOLUTION:
        raise ResourceError(f"N={n} exceeds the convolution budget {MAX_CONVOLUTION}")
    table.require(n - 1, "convolution index")
    peak = int(table.sigma0[1:n].max())
    if (n - 1) * peak * peak > INT64_MAX:
        raise ArithmeticOverflow(f"convolution for N={n} may exceed 64 bits")
    return int(kernels.divisor_convolution(table.sigma0, n))


def nu2_formula(n: int, table: SieveTable) -> int:
    """``nu_2(n)`` from the divisor convolution closed form."""
    if n < 2:
        raise DomainError(f"formula needs N >= 2, got {n}")
    table.require(n)
    bracket = divisor_convolution(n, table) - int(table.sigma1[n]) + int(table.sigma0[n])
    if bracket % 2:
        raise IntegrityError(f"odd bracket {bracket} in the nu_2 formula at N={n}")
    return bracket // 2
