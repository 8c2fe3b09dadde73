"""Factorization, divisor-function sieves and the sum-of-two-squares test."""
from __future__ import annotations

import json
import os
import re
import struct
from dataclasses import dataclass
from math import isqrt
from pathlib import Path
from typing import Iterator

import numpy as np

from . import kernels
from .errors import ArithmeticOverflow, DomainError, FormatError, PreconditionError, ResourceError

INT64_MAX = 2**63 - 1
DEFAULT_MAX_LIMIT = 10**8
DEFAULT_MEMORY_BUDGET = 4 * 2**30
# spf + sigma0 + sigma1 + the linear sieve's prime-power scratch
BYTES_PER_ENTRY = 20

SIEVE_MAGIC = b"PCL-SIEVE-1\n"
SIEVE_JSON_FORMAT = "pcl-sieve-1"

_TRIAL_CAP = 1 << 16


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise DomainError(f"malformed factorization {self.factors!r}")
            prod *= p**e
            last = p
        if prod != self.n:
            raise DomainError(f"factors multiply to {prod}, not {self.n}")

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)


def _check_natural(n: int) -> int:
    n = int(n)
    if n < 1:
        raise DomainError(f"expected a natural number >= 1, got {n}")
    if n > INT64_MAX:
        raise ArithmeticOverflow(f"{n} exceeds the 64-bit budget")
    return n


def factorize(n: int, table: "SieveTable | None" = None) -> Factorization:
    """Prime factorization of ``n``.

    Uses the table's smallest-prime-factor array when it covers ``n``; otherwise
    trial division up to 2**16 and sympy for any large cofactor.
    """
    n = _check_natural(n)
    factors: list[tuple[int, int]] = []
    if table is not None and table.spf is not None and n <= table.limit:
        spf = table.spf
        m = n
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        return Factorization(n, tuple(factors))

    m = n
    for p in (2, 3):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            factors.append((p, e))
    p = 5
    while p < _TRIAL_CAP and p * p <= m:
        for q in (p, p + 2):
            e = 0
            while m % q == 0:
                m //= q
                e += 1
            if e:
                factors.append((q, e))
        p += 6
    if m > 1:
        if m < _TRIAL_CAP * _TRIAL_CAP or p * p > m:
            factors.append((m, 1))
        else:
            from sympy import factorint

            factors.extend(sorted(factorint(m).items()))
    return Factorization(n, tuple(factors))


def divisor_count(f: Factorization) -> int:
    out = 1
    for _, e in f:
        out *= e + 1
    return out


def divisor_sum(f: Factorization) -> int:
    out = 1
    for p, e in f:
        out *= (p ** (e + 1) - 1) // (p - 1)
    if out > INT64_MAX:
        raise ArithmeticOverflow(f"sigma1({f.n}) = {out} exceeds the 64-bit budget")
    return out


def divisors(f: Factorization) -> list[int]:
    """All positive divisors, ascending."""
    out = [1]
    for p, e in f:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_sum_of_two_squares(n: int, positive: bool = False, table: "SieveTable | None" = None) -> bool:
    """Whether ``n = a**2 + b**2`` with ``a, b >= 0`` (``>= 1`` if ``positive``).

    Decided by the classical criterion: every prime ``p = 3 (mod 4)`` divides
    ``n`` to an even power. Zero is allowed by default, so perfect squares and
    doubled squares count.
    """
    f = factorize(n, table)
    r = 1
    for p, e in f:
        if p % 4 == 3 and e % 2:
            return False
        if p % 4 == 1:
            r *= e + 1
    if not positive:
        return True
    # the only zero-containing representations are (+-m, 0), (0, +-m) for n = m*m
    return not is_square(n) or r > 1


def sum_of_two_squares_bruteforce(n: int, positive: bool = False) -> bool:
    """Search ``a <= b`` directly; the independent route for the criterion above."""
    n = _check_natural(n)
    a = 1 if positive else 0
    while 2 * a * a <= n:
        if is_square(n - a * a):
            return True
        a += 1
    return False


def two_square_sums(limit: int, positive: bool = False) -> np.ndarray:
    """Boolean mask over ``0..limit`` of values ``a**2 + b**2`` (brute force)."""
    mask = np.zeros(limit + 1, dtype=bool)
    start = 1 if positive else 0
    squares = np.arange(start, isqrt(limit) + 1, dtype=np.int64) ** 2
    for sq in squares:
        sums = sq + squares
        mask[sums[sums <= limit]] = True
    return mask


def memory_budget() -> int:
    """Sieve memory budget in bytes, overridable through ``PCL_MAX_MEMORY``."""
    raw = os.environ.get("PCL_MAX_MEMORY")
    if not raw:
        return DEFAULT_MEMORY_BUDGET
    m = re.fullmatch(r"\s*(\d+)\s*([kKmMgGtT]?)[iI]?[bB]?\s*", raw)
    if not m:
        raise DomainError(f"cannot parse PCL_MAX_MEMORY={raw!r}")
    scale = {"": 1, "k": 2**10, "m": 2**20, "g": 2**30, "t": 2**40}[m.group(2).lower()]
    return int(m.group(1)) * scale


class SieveTable:
    """Immutable ``sigma0``/``sigma1`` lookup on ``1..limit``.

    Arrays are indexed by value (slot 0 is unused and zero). ``spf`` holds
    smallest prime factors when the table came from :func:`build_sieve`.
    """

    def __init__(self, limit: int, sigma0: np.ndarray, sigma1: np.ndarray, spf: np.ndarray | None = None):
        if len(sigma0) != limit + 1 or len(sigma1) != limit + 1:
            raise FormatError("sieve arrays do not match the declared limit")
        if spf is not None and len(spf) != limit + 1:
            raise FormatError("spf array does not match the declared limit")
        self.limit = int(limit)
        self.sigma0 = np.asarray(sigma0, dtype=np.int32)
        self.sigma1 = np.asarray(sigma1, dtype=np.int64)
        self.spf = None if spf is None else np.asarray(spf, dtype=np.int32)
        for arr in (self.sigma0, self.sigma1, self.spf):
            if arr is not None:
                arr.flags.writeable = False

    def __repr__(self) -> str:
        return f"SieveTable(limit={self.limit})"

    def require(self, n: int, what: str = "value") -> None:
        if n > self.limit:
            raise PreconditionError(f"sieve limit {self.limit} is below required {what} {n}")

    def save(self, path: str | os.PathLike) -> None:
        """Dump to ``path``; ``.json`` gets the JSON form, anything else binary."""
        path = Path(path)
        if path.suffix == ".json":
            doc = {
                "format": SIEVE_JSON_FORMAT,
                "limit": self.limit,
                "sigma0": self.sigma0[1:].tolist(),
                "sigma1": self.sigma1[1:].tolist(),
            }
            path.write_text(json.dumps(doc))
            return
        with open(path, "wb") as fh:
            fh.write(SIEVE_MAGIC)
            fh.write(struct.pack("<QB", self.limit, self.spf is not None))
            fh.write(self.sigma0.astype("<i4").tobytes())
            fh.write(self.sigma1.astype("<i8").tobytes())
            if self.spf is not None:
                fh.write(self.spf.astype("<i4").tobytes())

    @classmethod
    def load(cls, path: str | os.PathLike) -> "SieveTable":
        path = Path(path)
        with open(path, "rb") as fh:
            head = fh.read(len(SIEVE_MAGIC))
            if head == SIEVE_MAGIC:
                hdr = fh.read(9)
                if len(hdr) != 9:
                    raise FormatError(f"{path}: truncated header")
                limit, has_spf = struct.unpack("<QB", hdr)

                def block(width: int, dtype: str) -> np.ndarray:
                    raw = fh.read(width * (limit + 1))
                    if len(raw) != width * (limit + 1):
                        raise FormatError(f"{path}: truncated sieve arrays")
                    return np.frombuffer(raw, dtype=dtype)

                s0 = block(4, "<i4")
                s1 = block(8, "<i8")
                spf = block(4, "<i4") if has_spf else None
                if fh.read(1):
                    raise FormatError(f"{path}: trailing bytes after sieve arrays")
                return cls(limit, s0.copy(), s1.copy(), None if spf is None else spf.copy())
        try:
            doc = json.loads(path.read_text())
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise FormatError(f"{path}: not a sieve dump ({exc})") from None
        if not isinstance(doc, dict) or doc.get("format") != SIEVE_JSON_FORMAT:
            raise FormatError(f"{path}: missing or unsupported format tag")
        try:
            limit = int(doc["limit"])
            s0 = np.array([0] + doc["sigma0"], dtype=np.int32)
            s1 = np.array([0] + doc["sigma1"], dtype=np.int64)
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{path}: malformed sieve document ({exc})") from None
        return cls(limit, s0, s1)


def build_sieve(limit: int, max_limit: int = DEFAULT_MAX_LIMIT) -> SieveTable:
    """Tabulate ``sigma0``, ``sigma1`` and smallest prime factors up to ``limit``."""
    limit = int(limit)
    if limit < 1:
        raise DomainError(f"sieve limit must be >= 1, got {limit}")
    if limit > max_limit:
        raise ResourceError(f"sieve limit {limit} exceeds the configured maximum {max_limit}")
    need = BYTES_PER_ENTRY * (limit + 1)
    budget = memory_budget()
    if need > budget:
        raise ResourceError(f"sieve to {limit} needs ~{need} bytes, budget is {budget} (PCL_MAX_MEMORY)")
    spf, sigma0, sigma1 = kernels.sieve(limit)
    return SieveTable(limit, sigma0, sigma1, spf)
