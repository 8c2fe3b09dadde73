"""Single-N verifiers for the square-shifted divisor congruences."""
from __future__ import annotations

import enum
import json
import weakref
from dataclasses import dataclass, field
from math import isqrt
from typing import Any

import numpy as np

from . import kernels
from .arith import SieveTable, divisor_sum, factorize, is_sum_of_two_squares
from .errors import DomainError, IntegrityError
from .partitions import divisor_convolution, nu2_formula

FAMILIES: tuple[tuple[int, int], ...] = ((16, 14), (36, 30), (72, 42), (196, 70), (252, 114))
ODD_K_RESIDUES: tuple[tuple[int, int], ...] = ((16, 14), (196, 70))
THREE_FREE_FAMILIES: tuple[tuple[int, int], ...] = ((36, 30), (72, 42), (252, 114))


class Statement(str, enum.Enum):
    THM_MAIN = "thm_main"
    DOUBLECOUNT = "doublecount"
    COR_ODD = "cor_odd"
    COR_MOD3 = "cor_mod3"
    SIGMA1_MOD8 = "sigma1_mod8"


@dataclass
class CongruenceReport:
    """Outcome of checking one statement at one N.

    ``holds`` is ``None`` whenever ``hypotheses_met`` is false.
    """

    n: int
    statement: Statement
    hypotheses_met: bool
    reason: str = ""
    values: dict[str, Any] = field(default_factory=dict)
    holds: bool | None = None

    @property
    def is_counterexample(self) -> bool:
        return self.hypotheses_met and self.holds is False

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "statement": self.statement.value,
            "hypotheses_met": self.hypotheses_met,
            "reason": self.reason,
            "values": self.values,
            "holds": self.holds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "CongruenceReport":
        return cls(
            n=int(doc["n"]),
            statement=Statement(doc["statement"]),
            hypotheses_met=bool(doc["hypotheses_met"]),
            reason=doc.get("reason", ""),
            values=dict(doc.get("values", {})),
            holds=doc.get("holds"),
        )


_hooley_cache: "weakref.WeakKeyDictionary[SieveTable, np.ndarray]" = weakref.WeakKeyDictionary()


def hooley_table(table: SieveTable) -> np.ndarray:
    """``S(N)`` for every ``N <= table.limit`` (computed once per table)."""
    out = _hooley_cache.get(table)
    if out is None:
        out = kernels.hooley_sums(table.sigma0, table.limit)
        out.flags.writeable = False
        _hooley_cache[table] = out
    return out


def _shifted_terms(n: int, table: SieveTable) -> list[tuple[int, int]]:
    table.require(n - 1, "shifted argument")
    return [(k, int(table.sigma0[n - k * k])) for k in range(1, isqrt(n - 1) + 1)]


def hooley_sum(n: int, table: SieveTable) -> int:
    """``S(n) = sum(sigma0(n - k*k) for 1 <= k < sqrt(n))``."""
    if n < 2:
        raise DomainError(f"S(N) needs N >= 2, got {n}")
    return sum(v for _, v in _shifted_terms(n, table))


def family_membership(n: int) -> list[tuple[int, int]]:
    return [(a, b) for a, b in FAMILIES if n >= b and n % a == b]


def sigma1_mod8(n: int, table: SieveTable | None = None) -> int:
    return divisor_sum(factorize(n, table)) % 8


def _unmet(n: int, statement: Statement, reason: str) -> CongruenceReport:
    return CongruenceReport(n, statement, False, reason)


def verify_thm_main(n: int, table: SieveTable) -> CongruenceReport:
    fams = family_membership(n)
    if not fams:
        return _unmet(n, Statement.THM_MAIN, "N is not in any of the five residue families")
    s = hooley_sum(n, table)
    return CongruenceReport(
        n,
        Statement.THM_MAIN,
        True,
        "N = An + B for " + ", ".join(f"({a},{b})" for a, b in fams),
        {"S": s, "S_mod4": s % 4, "families": [list(p) for p in fams]},
        s % 4 == 0,
    )


def doublecount_hypotheses(n: int, table: SieveTable | None = None) -> tuple[bool, str]:
    if n % 4 != 2:
        return False, f"N = {n % 4} (mod 4); need N = 2m with m odd"
    if is_sum_of_two_squares(n, table=table):
        return False, "N is a sum of two squares"
    return True, "N = 2m with m odd, and N is not a sum of two squares"


def verify_doublecount(n: int, table: SieveTable) -> CongruenceReport:
    """``nu2(N) + S(N) + sigma1(N)/2 = 0 (mod 4)``, checked alongside its rewritten form."""
    ok, reason = doublecount_hypotheses(n, table)
    if not ok:
        return _unmet(n, Statement.DOUBLECOUNT, reason)
    table.require(n)
    nu2 = nu2_formula(n, table)
    s = hooley_sum(n, table)
    sigma1 = int(table.sigma1[n])
    if sigma1 % 2:
        raise IntegrityError(f"sigma1({n}) = {sigma1} is odd for an in-hypothesis N")
    total = nu2 + s + sigma1 // 2
    conv = divisor_convolution(n, table)
    head = int(table.sigma0[n]) + conv
    if head % 2:
        raise IntegrityError(f"sigma0(N) + convolution is odd at N={n}")
    rewritten = head // 2 + s
    if total != rewritten:
        raise IntegrityError(f"doublecount forms disagree at N={n}: {total} != {rewritten}")
    return CongruenceReport(
        n,
        Statement.DOUBLECOUNT,
        True,
        reason,
        {
            "nu2": nu2,
            "S": s,
            "half_sigma1": sigma1 // 2,
            "total": total,
            "residue": total % 4,
            "rewritten_residue": rewritten % 4,
        },
        total % 4 == 0,
    )


def verify_cor_odd(n: int, table: SieveTable) -> CongruenceReport:
    """Odd ``k`` with ``sigma0(N - k^2) = 2 (mod 4)`` come in an even number."""
    hits = [(a, b) for a, b in ODD_K_RESIDUES if n % a == b]
    if not hits:
        return _unmet(n, Statement.COR_ODD, "N is neither 14 (mod 16) nor 70 (mod 196)")
    terms = _shifted_terms(n, table)
    odd_hits = [k for k, v in terms if k % 2 and v % 4 == 2]
    even_bad = [k for k, v in terms if k % 2 == 0 and v % 4 != 0]
    return CongruenceReport(
        n,
        Statement.COR_ODD,
        True,
        "N = " + " or ".join(f"{b} (mod {a})" for a, b in hits),
        {
            "odd_count": len(odd_hits),
            "odd_k": odd_hits,
            "even_terms_checked": sum(1 for k, _ in terms if k % 2 == 0),
            "even_terms_not_0_mod4": even_bad,
        },
        len(odd_hits) % 2 == 0,
    )


def verify_cor_mod3(n: int, table: SieveTable) -> CongruenceReport:
    """Restricting ``S(N)`` to ``3 ∤ k`` keeps it divisible by 4."""
    hits = [(a, b) for a, b in THREE_FREE_FAMILIES if n >= b and n % a == b]
    if not hits:
        return _unmet(n, Statement.COR_MOD3, "N is not in (36,30), (72,42) or (252,114)")
    terms = _shifted_terms(n, table)
    restricted = sum(v for k, v in terms if k % 3)
    multiple3_bad = [k for k, v in terms if k % 3 == 0 and v % 4 != 0]
    return CongruenceReport(
        n,
        Statement.COR_MOD3,
        True,
        "N = An + B for " + ", ".join(f"({a},{b})" for a, b in hits),
        {
            "restricted_sum": restricted,
            "residue": restricted % 4,
            "multiple_of_3_terms_not_0_mod4": multiple3_bad,
        },
        restricted % 4 == 0,
    )


def verify_sigma1_mod8(n: int, table: SieveTable | None = None) -> CongruenceReport:
    fams = family_membership(n)
    if not fams:
        return _unmet(n, Statement.SIGMA1_MOD8, "N is not in any of the five residue families")
    r = sigma1_mod8(n, table)
    return CongruenceReport(n, Statement.SIGMA1_MOD8, True, "", {"residue": r}, r == 0)


VERIFIERS = {
    Statement.THM_MAIN: verify_thm_main,
    Statement.DOUBLECOUNT: verify_doublecount,
    Statement.COR_ODD: verify_cor_odd,
    Statement.COR_MOD3: verify_cor_mod3,
    Statement.SIGMA1_MOD8: verify_sigma1_mod8,
}
