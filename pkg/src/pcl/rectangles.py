"""Rectangle pairs, the gluing operation and the five-way multiset decomposition.

A partition of N with at most two part sizes is a Young diagram made of two
stacked rectangles. Gluing every canonical rectangle pair in all four
orientations gives a multiset whose size is a multiple of 4; classifying its
distinct elements splits that size into ``nu_2(N)``, the Hooley sum and two
divisor sums.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import isqrt

from . import kernels
from .arith import SieveTable, divisors, factorize, is_sum_of_two_squares
from .congruences import hooley_sum
from .errors import DomainError, HypothesisError, IntegrityError, ResourceError
from .partitions import nu2_formula

ENUMERATION_BOUND = 5000


@dataclass(frozen=True, order=True)
class Rectangle:
    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DomainError(f"rectangle sides must be >= 1, got {self.rows}x{self.cols}")

    @property
    def cells(self) -> int:
        return self.rows * self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def T(self) -> "Rectangle":
        return Rectangle(self.cols, self.rows)

    def transpose(self) -> "Rectangle":
        return self.T

    def __str__(self) -> str:
        return f"{self.rows}x{self.cols}"


def _canonical_key(r: Rectangle) -> tuple[int, int, int]:
    return (r.cells, r.rows, r.cols)


@dataclass(frozen=True)
class CanonicalPair:
    """Unordered pair of ``rows <= cols`` rectangles, stored smaller-first."""

    first: Rectangle
    second: Rectangle

    def __post_init__(self):
        for r in (self.first, self.second):
            if r.rows > r.cols:
                raise DomainError(f"canonical pairs need rows <= cols, got {r}")
        if _canonical_key(self.first) > _canonical_key(self.second):
            a, b = self.second, self.first
            object.__setattr__(self, "first", a)
            object.__setattr__(self, "second", b)

    @property
    def cells(self) -> int:
        return self.first.cells + self.second.cells

    def __str__(self) -> str:
        return f"{{{self.first},{self.second}}}"


@dataclass(frozen=True, order=True)
class GluedPair:
    """Unordered pair of oriented rectangles; orientation is kept, order is not."""

    x: Rectangle
    y: Rectangle

    def __post_init__(self):
        if self.y < self.x:
            a, b = self.y, self.x
            object.__setattr__(self, "x", a)
            object.__setattr__(self, "y", b)

    @property
    def cells(self) -> int:
        return self.x.cells + self.y.cells

    @property
    def columns_differ(self) -> bool:
        return self.x.cols != self.y.cols

    @property
    def has_square(self) -> bool:
        return self.x.is_square or self.y.is_square

    @property
    def is_transpose_pair(self) -> bool:
        return self.x == self.y.T

    def diagram(self, cell: str = "#") -> str:
        """Text Young diagram, wider rectangle on top."""
        top, bottom = (self.x, self.y) if self.x.cols >= self.y.cols else (self.y, self.x)
        rows = [cell * top.cols] * top.rows + [cell * bottom.cols] * bottom.rows
        return "\n".join(rows)

    def __str__(self) -> str:
        return f"{{{self.x},{self.y}}}"


@dataclass(frozen=True)
class MultiplicityRecord:
    mA: int
    mB: int
    mC: int
    mD: int
    mE: int

    def __post_init__(self):
        if self.mA not in (1, 2) or any(v not in (0, 1) for v in (self.mB, self.mC, self.mD, self.mE)):
            raise IntegrityError(f"multiplicities out of range: {self}")

    @property
    def parts_total(self) -> int:
        return self.mB + self.mC + self.mD + self.mE


@dataclass(frozen=True)
class MultisetCounts:
    a: int
    b: int
    c: int
    d: int
    e: int

    @property
    def identity_holds(self) -> bool:
        return self.a == self.b + self.c + self.d + self.e

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.e)


def _check_n(n: int, bound: int) -> None:
    if n < 2:
        raise DomainError(f"N must be >= 2, got {n}")
    if n > bound:
        raise ResourceError(f"N={n} exceeds the enumeration bound {bound}")


def _require_not_two_squares(n: int, table: SieveTable | None = None) -> None:
    if is_sum_of_two_squares(n, table=table):
        raise HypothesisError(f"N={n} is a sum of two squares")


def rectangles_of_area(u: int) -> list[Rectangle]:
    """``rows <= cols`` rectangles with ``u`` cells, by increasing rows."""
    return [Rectangle(r, u // r) for r in range(1, isqrt(u) + 1) if u % r == 0]


def canonical_pairs(n: int, bound: int = ENUMERATION_BOUND) -> list[CanonicalPair]:
    _check_n(n, bound)
    out = []
    for u in range(1, n // 2 + 1):
        small, big = rectangles_of_area(u), rectangles_of_area(n - u)
        for i, x in enumerate(small):
            for y in big[i:] if u == n - u else big:
                out.append(CanonicalPair(x, y))
    return out


def glue(x: Rectangle, y: Rectangle) -> list[GluedPair]:
    """The four orientation variants ``{X,Y}, {X,Y^T}, {X^T,Y}, {X^T,Y^T}``, repeats kept."""
    return [GluedPair(x, y), GluedPair(x, y.T), GluedPair(x.T, y), GluedPair(x.T, y.T)]


def _classify(p: GluedPair) -> MultiplicityRecord:
    if p.x.is_square and p.y.is_square:
        raise HypothesisError(f"{p}: both rectangles are squares")
    if p.columns_differ:
        if p.is_transpose_pair:
            return MultiplicityRecord(2, 1, 0, 0, 1)
        if p.has_square:
            return MultiplicityRecord(2, 1, 1, 0, 0)
        return MultiplicityRecord(1, 1, 0, 0, 0)
    if p.is_transpose_pair:
        raise HypothesisError(f"{p}: X = Y^T with equal columns forces squares")
    if p.has_square:
        return MultiplicityRecord(2, 0, 1, 1, 0)
    return MultiplicityRecord(1, 0, 0, 1, 0)


def classify(p: GluedPair, n: int) -> MultiplicityRecord:
    """Multiplicities of ``p`` in the five multisets, per the case table."""
    if p.cells != n:
        raise DomainError(f"{p} has {p.cells} cells, not {n}")
    _require_not_two_squares(n)
    return _classify(p)


def glued_multiset(n: int, bound: int = ENUMERATION_BOUND) -> Counter:
    ms: Counter = Counter()
    for cp in canonical_pairs(n, bound):
        ms.update(glue(cp.first, cp.second))
    return ms


def enumerate_multiset_A(
    n: int, unsafe: bool = False, bound: int = ENUMERATION_BOUND
) -> tuple[MultisetCounts, dict[GluedPair, MultiplicityRecord]]:
    """Counts by exhaustive gluing plus each distinct element's case-table record.

    With ``unsafe=True`` a sum-of-two-squares N is accepted and the raw counts
    are returned without records (the additive identity may then fail).
    """
    _check_n(n, bound)
    if not unsafe:
        _require_not_two_squares(n)
    ms = glued_multiset(n, bound)
    b = sum(1 for p in ms if p.columns_differ)
    c = sum(1 for p in ms if p.has_square)
    d = sum(1 for p in ms if not p.columns_differ)
    e = sum(1 for p in ms if p.is_transpose_pair)
    counts = MultisetCounts(sum(ms.values()), b, c, d, e)
    records = {} if unsafe else {p: _classify(p) for p in sorted(ms)}
    return counts, records


def count_multiset_A(n: int, unsafe: bool = False, bound: int = ENUMERATION_BOUND) -> tuple[MultisetCounts, int]:
    """Kernel-backed enumeration: ``(counts, number of canonical pairs)``."""
    _check_n(n, bound)
    if not unsafe:
        _require_not_two_squares(n)
    a, b, c, d, e, pairs = kernels.glued_counts(n)
    return MultisetCounts(int(a), int(b), int(c), int(d), int(e)), int(pairs)


def canonical_pair_count(n: int, table: SieveTable) -> int:
    """Number of canonical pairs from divisor counts alone."""
    table.require(n)
    s0 = table.sigma0
    total = 0
    for u in range(1, (n + 1) // 2):
        total += ((int(s0[u]) + 1) // 2) * ((int(s0[n - u]) + 1) // 2)
    if n % 2 == 0:
        r = (int(s0[n // 2]) + 1) // 2
        total += r * (r + 1) // 2
    return total


def simplified_d_e(n: int, table: SieveTable) -> tuple[int, int]:
    """``|D| = (sigma1(N) - sigma0(N/2)) / 2`` and ``|E| = sigma0(N/2) / 2`` for ``N = 2 (mod 4)``."""
    if n % 4 != 2:
        raise HypothesisError(f"simplified counts need N = 2 (mod 4), got N={n}")
    table.require(n)
    half0 = int(table.sigma0[n // 2])
    sigma1 = int(table.sigma1[n])
    if half0 % 2:
        raise HypothesisError(f"N/2 = {n // 2} is a perfect square")
    if sigma1 % 2:
        raise IntegrityError(f"sigma1({n}) = {sigma1} is odd")
    return (sigma1 - half0) // 2, half0 // 2


def counts_by_formula(n: int, table: SieveTable) -> MultisetCounts:
    """The five counts from closed forms; no enumeration involved."""
    if n < 2:
        raise DomainError(f"N must be >= 2, got {n}")
    table.require(n)
    _require_not_two_squares(n, table)
    b = nu2_formula(n, table)
    c = hooley_sum(n, table)
    d = sum(q // 2 for q in divisors(factorize(n, table)))
    e = 0
    if n % 2 == 0:
        half0 = int(table.sigma0[n // 2])
        if half0 % 2:
            raise HypothesisError(f"N/2 = {n // 2} is a perfect square")
        e = half0 // 2
    if n % 4 == 2:
        if (d, e) != simplified_d_e(n, table):
            raise IntegrityError(f"simplified D/E disagree with the divisor sums at N={n}")
    return MultisetCounts(4 * canonical_pair_count(n, table), b, c, d, e)
