"""Residue-family scans of ``S(N) mod 4`` with resumable checkpoints."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
import weakref
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from . import kernels
from .arith import SieveTable
from .congruences import hooley_table
from .errors import DomainError, FormatError

log = logging.getLogger(__name__)

CHECKPOINT_VERSION = "pcl-ckpt-1"
CSV_VERSION = "pcl-scan-csv-1"
CSV_COLUMNS = ("A", "B", "n_max_reached", "checked", "failures", "all_pass")
REPORT_FAILURE_CAP = 100
DEFAULT_N_LIMIT = 10**5
DEFAULT_A_MAX = 1000


@dataclass
class FamilyScanResult:
    A: int
    B: int
    n_max: int
    checked: int
    failures: list[tuple[int, int]]
    skipped: int = 0
    elapsed: float = 0.0

    @property
    def all_pass(self) -> bool:
        return not self.failures

    def csv_row(self) -> list:
        return [self.A, self.B, self.n_max, self.checked, len(self.failures), str(self.all_pass).lower()]

    def failure_records(self, cap: int | None = REPORT_FAILURE_CAP) -> list[dict]:
        rows = self.failures if cap is None else self.failures[:cap]
        return [{"A": self.A, "B": self.B, "N": n, "S_mod4": r} for n, r in rows]


@dataclass(frozen=True)
class PairOutcome:
    """Result for one ``(A, B)``; ``failure`` is the first failing ``(N, S mod 4)``."""

    A: int
    B: int
    last_n: int
    failure: tuple[int, int] | None = None

    @property
    def passed(self) -> bool:
        return self.failure is None

    @property
    def checked(self) -> int:
        return self.last_n + 1

    def to_json(self) -> str:
        doc = {
            "A": self.A,
            "B": self.B,
            "last_n": self.last_n,
            "failures": [] if self.failure is None else [list(self.failure)],
        }
        return json.dumps(doc, sort_keys=True)


@dataclass
class ScanState:
    """In-progress pair scan: everything a checkpoint stores."""

    a_max: int
    n_limit: int
    outcomes: dict[tuple[int, int], PairOutcome] = field(default_factory=dict)

    def sorted_outcomes(self) -> list[PairOutcome]:
        return [self.outcomes[k] for k in sorted(self.outcomes)]


@dataclass
class PairScanSummary:
    a_max: int
    n_limit: int
    passing_pairs: list[tuple[int, int]]
    outcomes: list[PairOutcome]
    complete: bool = True
    elapsed: float = 0.0

    @property
    def structural_check(self) -> bool:
        return all(a % 4 == 0 and b % 4 == 2 for a, b in self.passing_pairs)

    @property
    def structural_violations(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in self.passing_pairs if not (a % 4 == 0 and b % 4 == 2)]


_mod4_cache: "weakref.WeakKeyDictionary[SieveTable, np.ndarray]" = weakref.WeakKeyDictionary()


def hooley_mod4(table: SieveTable) -> np.ndarray:
    out = _mod4_cache.get(table)
    if out is None:
        out = (hooley_table(table) % 4).astype(np.int8)
        out.flags.writeable = False
        _mod4_cache[table] = out
    return out


def n_max_for(a: int, b: int, n_limit: int) -> int:
    """Largest ``n`` with ``a*n + b <= n_limit`` (``-1`` if none)."""
    return (n_limit - b) // a if n_limit >= b else -1


def _check_family(a: int, b: int) -> None:
    if a < 1:
        raise DomainError(f"modulus A must be >= 1, got {a}")
    if not 0 <= b < a:
        raise DomainError(f"residue B must satisfy 0 <= B < A, got B={b}, A={a}")


def scan_family(a: int, b: int, n_max: int, table: SieveTable) -> FamilyScanResult:
    """Check ``S(a*n + b) = 0 (mod 4)`` for ``n = 0..n_max``; every failure is listed."""
    _check_family(a, b)
    t0 = time.perf_counter()
    table.require(a * n_max + b, "family member")
    s4 = hooley_mod4(table)
    fails = kernels.residue_failures(s4, a, b, n_max)
    skipped = sum(1 for n in range(min(n_max + 1, 2)) if a * n + b < 2)
    if skipped:
        log.info("(%d,%d): skipped %d member(s) below 2 (empty sum)", a, b, skipped)
    return FamilyScanResult(
        a,
        b,
        n_max,
        n_max + 1,
        [(int(n), int(s4[n])) for n in fails],
        skipped,
        time.perf_counter() - t0,
    )


def _scan_modulus(s4: np.ndarray, a: int, n_limit: int) -> list[PairOutcome]:
    out = []
    for b in range(a):
        n_fail, last = kernels.first_failure(s4, a, b, n_limit, 0)
        failure = None if n_fail < 0 else (int(n_fail), int(s4[n_fail]))
        out.append(PairOutcome(a, b, int(last), failure))
    return out


_worker_s4: np.ndarray | None = None


def _init_worker(s4: np.ndarray) -> None:
    global _worker_s4
    _worker_s4 = s4


def _worker_scan(args: tuple[int, int]) -> list[PairOutcome]:
    a, n_limit = args
    assert _worker_s4 is not None
    return _scan_modulus(_worker_s4, a, n_limit)


def scan_all_pairs(
    a_max: int,
    n_limit: int,
    table: SieveTable,
    checkpoint: str | os.PathLike | None = None,
    resume: bool = False,
    jobs: int = 1,
    max_moduli: int | None = None,
    checkpoint_every: float = 5.0,
) -> PairScanSummary:
    """Test every ``(A, B)`` with ``2 <= A <= a_max`` against all ``N = An+B <= n_limit``.

    Work is done one modulus at a time; with ``checkpoint`` set, finished moduli
    are flushed there at most every ``checkpoint_every`` seconds and on exit.
    ``resume`` continues from an existing checkpoint. ``max_moduli`` stops early
    (the summary is then marked incomplete), which is how interruption is tested.
    """
    if a_max < 2:
        raise DomainError(f"a_max must be >= 2, got {a_max}")
    table.require(n_limit, "n_limit")
    t0 = time.perf_counter()
    state = ScanState(a_max, n_limit)
    if resume:
        if checkpoint is None:
            raise DomainError("resume requested without a checkpoint path")
        state = checkpoint_read(checkpoint)
        if (state.a_max, state.n_limit) != (a_max, n_limit):
            raise FormatError(
                f"checkpoint was taken for a_max={state.a_max}, n_limit={state.n_limit}; "
                f"requested a_max={a_max}, n_limit={n_limit}"
            )
    done_moduli = {a for a, _ in state.outcomes if all((a, b) in state.outcomes for b in range(a))}
    todo = [a for a in range(2, a_max + 1) if a not in done_moduli]
    if max_moduli is not None:
        todo = todo[:max_moduli]
    s4 = hooley_mod4(table)

    last_flush = time.monotonic()

    def record(batch: Iterable[PairOutcome]) -> None:
        nonlocal last_flush
        for o in batch:
            state.outcomes[(o.A, o.B)] = o
        if checkpoint is not None and time.monotonic() - last_flush >= checkpoint_every:
            checkpoint_write(state, checkpoint)
            last_flush = time.monotonic()

    try:
        if jobs > 1 and len(todo) > 1:
            with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(s4,)) as pool:
                for batch in pool.map(_worker_scan, [(a, n_limit) for a in todo]):
                    record(batch)
        else:
            for a in todo:
                record(_scan_modulus(s4, a, n_limit))
    finally:
        if checkpoint is not None:
            checkpoint_write(state, checkpoint)

    outcomes = state.sorted_outcomes()
    complete = all((a, b) in state.outcomes for a in range(2, a_max + 1) for b in range(a))
    return PairScanSummary(
        a_max,
        n_limit,
        [(o.A, o.B) for o in outcomes if o.passed],
        outcomes,
        complete,
        time.perf_counter() - t0,
    )


def checkpoint_write(state: ScanState, path: str | os.PathLike) -> None:
    """Atomically write the state as JSON lines: a header, then one line per pair."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as fh:
        header = {"version": CHECKPOINT_VERSION, "a_max": state.a_max, "n_limit": state.n_limit}
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for o in state.sorted_outcomes():
            fh.write(o.to_json() + "\n")
    os.replace(tmp, path)


def checkpoint_read(path: str | os.PathLike) -> ScanState:
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not a text checkpoint ({exc})") from None
    if not lines:
        raise FormatError(f"{path}: empty checkpoint")
    try:
        header = json.loads(lines[0])
        if header.get("version") != CHECKPOINT_VERSION:
            raise FormatError(f"{path}: version {header.get('version')!r}, expected {CHECKPOINT_VERSION!r}")
        state = ScanState(int(header["a_max"]), int(header["n_limit"]))
        for lineno, line in enumerate(lines[1:], start=2):
            doc = json.loads(line)
            fails = doc["failures"]
            if len(fails) > 1:
                raise FormatError(f"{path}:{lineno}: more than one failure for a pair")
            failure = (int(fails[0][0]), int(fails[0][1])) if fails else None
            o = PairOutcome(int(doc["A"]), int(doc["B"]), int(doc["last_n"]), failure)
            if (o.A, o.B) in state.outcomes:
                raise FormatError(f"{path}:{lineno}: duplicate pair ({o.A},{o.B})")
            state.outcomes[(o.A, o.B)] = o
    except FormatError:
        raise
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        raise FormatError(f"{path}: corrupt checkpoint ({exc})") from None
    return state


def write_csv(rows: Iterable[list], path: str | os.PathLike | None, comment: str = "") -> str:
    """Write scan rows with the fixed column order; returns the text written."""
    buf = io.StringIO()
    buf.write(f"# {CSV_VERSION}{' ' + comment if comment else ''}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(rows)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def pair_rows(summary: PairScanSummary) -> list[list]:
    return [
        [o.A, o.B, o.last_n, o.checked, 0 if o.passed else 1, str(o.passed).lower()]
        for o in summary.outcomes
    ]


def failure_jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
