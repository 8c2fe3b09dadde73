"""Command-line entry point: ``pcl <command> ...``.

Exit codes: 0 success, 1 counterexample found, 2 usage/precondition error or
unmet hypotheses, 3 resource/arithmetic/consistency error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import kernels
from .arith import DEFAULT_MAX_LIMIT, SieveTable, build_sieve
from .congruences import VERIFIERS, CongruenceReport, Statement
from .errors import (
    ArithmeticOverflow,
    DomainError,
    FormatError,
    HypothesisError,
    IntegrityError,
    PclError,
    PreconditionError,
    ResourceError,
)
from .partitions import BRUTE_FORCE_BOUND, nu_k_bruteforce, nu2_formula
from .rectangles import (
    ENUMERATION_BOUND,
    count_multiset_A,
    counts_by_formula,
    enumerate_multiset_A,
    glued_multiset,
)
from .scanner import (
    DEFAULT_A_MAX,
    DEFAULT_N_LIMIT,
    REPORT_FAILURE_CAP,
    failure_jsonl,
    n_max_for,
    pair_rows,
    scan_all_pairs,
    scan_family,
    write_csv,
)

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

_EXIT_FOR = {
    DomainError: EXIT_USAGE,
    PreconditionError: EXIT_USAGE,
    HypothesisError: EXIT_USAGE,
    FormatError: EXIT_USAGE,
    ResourceError: EXIT_RESOURCE,
    ArithmeticOverflow: EXIT_RESOURCE,
    IntegrityError: EXIT_RESOURCE,
}

STATEMENTS = {
    "thm-main": Statement.THM_MAIN,
    "doublecount": Statement.DOUBLECOUNT,
    "cor-odd": Statement.COR_ODD,
    "cor-mod3": Statement.COR_MOD3,
    "sigma1-mod8": Statement.SIGMA1_MOD8,
}


class _UsageError(PclError):
    pass


def _family(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A,B (two integers), got {text!r}") from None
    if a < 1 or not 0 <= b < a:
        raise argparse.ArgumentTypeError(f"need A >= 1 and 0 <= B < A, got {text!r}")
    return a, b


def _natural(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = argparse.ArgumentParser(prog="pcl", description=__doc__, formatter_class=fmt)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text", help="report format")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for pair scans")
    p.add_argument("--sieve-file", type=Path, help="reuse a dump written by `pcl sieve --out`")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", help="tabulate sigma0/sigma1", formatter_class=fmt)
    s.add_argument("--limit", type=_natural, required=True, help=f"upper bound (max {DEFAULT_MAX_LIMIT})")
    s.add_argument("--out", type=Path, help="dump file (.json for JSON, else binary)")

    s = sub.add_parser("nu2", help="partitions with exactly two part sizes", formatter_class=fmt)
    s.add_argument("n", type=_natural)
    s.add_argument(
        "--method",
        choices=("formula", "brute", "both"),
        default="formula",
        help=f"brute force is capped at N <= {BRUTE_FORCE_BOUND}",
    )

    s = sub.add_parser("pairs", help="glued rectangle-pair decomposition", formatter_class=fmt)
    s.add_argument("n", type=_natural, help=f"N <= {ENUMERATION_BOUND}")
    s.add_argument("--emit-diagrams", action="store_true", help="print every distinct glued diagram")
    s.add_argument("--unsafe", action="store_true", help="allow N that is a sum of two squares (raw counts)")

    s = sub.add_parser("verify", help="check one congruence statement", formatter_class=fmt)
    s.add_argument("statement", choices=sorted(STATEMENTS))
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=_natural, help="single N")
    g.add_argument("--family", type=_family, help="residue family A,B (with --n-max)")
    s.add_argument("--n-max", type=_natural, help="check N = A*n + B for n = 0..n_max")

    s = sub.add_parser("scan", help="residue-family range scans", formatter_class=fmt)
    scan = s.add_subparsers(dest="scan_kind", required=True)
    f = scan.add_parser("family", help="S(An+B) mod 4 over one family", formatter_class=fmt)
    f.add_argument("--family", type=_family, required=True)
    f.add_argument("--n-limit", type=_natural, default=DEFAULT_N_LIMIT, help="largest N tested")
    f.add_argument("--out", type=Path, help="CSV summary path")
    f.add_argument("--failures", type=Path, help="failure detail JSON-lines path")
    c = scan.add_parser("conjecture-16n6", help="the N = 16n + 6 experiment", formatter_class=fmt)
    c.add_argument("--n-limit", type=_natural, default=DEFAULT_N_LIMIT, help="largest N tested")
    c.add_argument("--failures", type=Path, help="failure detail JSON-lines path")
    q = scan.add_parser("pairs", help="every (A,B) with 2 <= A <= a_max", formatter_class=fmt)
    q.add_argument("--a-max", type=_natural, default=DEFAULT_A_MAX)
    q.add_argument("--n-limit", type=_natural, default=DEFAULT_N_LIMIT, help="largest N tested")
    q.add_argument("--out", type=Path, required=True, help="CSV of every pair tested")
    q.add_argument("--resume", type=Path, help="continue from this checkpoint (and keep updating it)")
    q.add_argument("--checkpoint", type=Path, help="checkpoint path (default: OUT.ckpt)")
    q.add_argument("--failures", type=Path, help="first-failure detail JSON-lines path")
    return p


class _Runner:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.out = sys.stdout

    def emit(self, text: str = "") -> None:
        print(text, file=self.out)

    def header(self, **fields) -> None:
        if self.args.format == "json":
            return
        parts = " ".join(f"{k}={v}" for k, v in fields.items())
        self.emit(f"# pcl {self.args.command} backend={kernels.BACKEND} {parts}")

    def table(self, need: int) -> SieveTable:
        need = max(need, 1)
        if self.args.sieve_file is not None:
            t = SieveTable.load(self.args.sieve_file)
            t.require(need, "N")
            return t
        return build_sieve(need)

    # commands

    def cmd_sieve(self) -> int:
        t0 = time.perf_counter()
        t = build_sieve(self.args.limit)
        elapsed = time.perf_counter() - t0
        if self.args.out:
            t.save(self.args.out)
        doc = {
            "limit": t.limit,
            "backend": kernels.BACKEND,
            "seconds": round(elapsed, 3),
            "sigma0_last": int(t.sigma0[t.limit]),
            "sigma1_last": int(t.sigma1[t.limit]),
            "out": str(self.args.out) if self.args.out else None,
        }
        if self.args.format == "json":
            self.emit(json.dumps(doc, sort_keys=True))
        else:
            self.header(limit=t.limit)
            for k, v in doc.items():
                self.emit(f"{k}: {v}")
        return EXIT_OK

    def cmd_nu2(self) -> int:
        n, method = self.args.n, self.args.method
        if n < 1:
            raise DomainError("nu2 needs N >= 1")
        vals = {}
        if method in ("formula", "both"):
            vals["formula"] = nu2_formula(n, self.table(n)) if n >= 2 else 0
        if method in ("brute", "both"):
            vals["brute"] = nu_k_bruteforce(n, 2)
        if method == "both" and vals["formula"] != vals["brute"]:
            raise IntegrityError(f"nu2({n}): formula {vals['formula']} != brute force {vals['brute']}")
        value = next(iter(vals.values()))
        if self.args.format == "json":
            self.emit(json.dumps({"n": n, "nu2": value, "method": method}, sort_keys=True))
        else:
            self.emit(str(value))
        return EXIT_OK

    def cmd_pairs(self) -> int:
        n, unsafe = self.args.n, self.args.unsafe
        if self.args.emit_diagrams:
            counts, _ = enumerate_multiset_A(n, unsafe=unsafe)
        else:
            counts, _ = count_multiset_A(n, unsafe=unsafe)
        formula = None if unsafe else counts_by_formula(n, self.table(n))
        if formula is not None and formula != counts:
            raise IntegrityError(f"enumeration {counts} disagrees with closed forms {formula} at N={n}")
        doc = {"n": n, "A": counts.a, "B": counts.b, "C": counts.c, "D": counts.d, "E": counts.e,
               "identity_holds": counts.identity_holds, "unsafe": unsafe}
        if self.args.format == "json":
            self.emit(json.dumps(doc, sort_keys=True))
        else:
            a, b, c, d, e = counts.as_tuple()
            rel = "=" if counts.identity_holds else "!="
            self.emit(f"|A| = {a} {rel} {b} + {c} + {d} + {e} = |B| + |C| + |D| + |E|")
        if self.args.emit_diagrams and self.args.format != "json":
            for gp, mult in sorted(glued_multiset(n).items()):
                self.emit("")
                self.emit(f"{gp} x{mult}")
                self.emit(gp.diagram())
        return EXIT_OK

    def _reports_out(self, reports: list[CongruenceReport]) -> int:
        fmt = self.args.format
        if fmt == "json":
            for r in reports:
                self.emit(r.to_json())
        elif fmt == "csv":
            self.emit("n,statement,hypotheses_met,holds")
            for r in reports:
                holds = "" if r.holds is None else str(r.holds).lower()
                self.emit(f"{r.n},{r.statement.value},{str(r.hypotheses_met).lower()},{holds}")
        else:
            for r in reports:
                if not r.hypotheses_met:
                    self.emit(f"N={r.n} {r.statement.value}: hypotheses unmet ({r.reason})")
                else:
                    verdict = "holds" if r.holds else "FAILS"
                    vals = " ".join(f"{k}={v}" for k, v in r.values.items())
                    self.emit(f"N={r.n} {r.statement.value}: {verdict} [{vals}]")
        if any(r.is_counterexample for r in reports):
            return EXIT_COUNTEREXAMPLE
        if any(not r.hypotheses_met for r in reports):
            first = next(r for r in reports if not r.hypotheses_met)
            print(f"pcl-error kind=HypothesesUnmet n={first.n} msg={json.dumps(first.reason)}", file=sys.stderr)
            return EXIT_USAGE
        return EXIT_OK

    def cmd_verify(self) -> int:
        stmt = STATEMENTS[self.args.statement]
        if self.args.n is not None:
            if self.args.n_max is not None:
                raise _UsageError("--n-max only applies with --family")
            ns = [self.args.n]
        else:
            if self.args.n_max is None:
                raise _UsageError("--family needs --n-max")
            a, b = self.args.family
            ns = [a * k + b for k in range(self.args.n_max + 1)]
        if min(ns) < 2:
            raise DomainError("verifiers need N >= 2")
        table = self.table(max(ns))
        self.header(statement=stmt.value, count=len(ns), sieve_limit=table.limit)
        return self._reports_out([VERIFIERS[stmt](n, table) for n in ns])

    def _family_scan(self, a: int, b: int, n_limit: int, label: str) -> int:
        n_max = n_max_for(a, b, n_limit)
        if n_max < 0:
            raise DomainError(f"no member of ({a},{b}) is <= {n_limit}")
        table = self.table(a * n_max + b)
        res = scan_family(a, b, n_max, table)
        path = getattr(self.args, "failures", None)
        if path:
            Path(path).write_text(failure_jsonl(res.failure_records(cap=None)))
        fmt = self.args.format
        if fmt == "json":
            doc = {"A": a, "B": b, "n_limit": n_limit, "n_max": n_max, "checked": res.checked,
                   "skipped": res.skipped, "failures": res.failure_records(), "all_pass": res.all_pass,
                   "elapsed": round(res.elapsed, 3)}
            self.emit(json.dumps(doc, sort_keys=True))
        elif fmt == "csv":
            self.out.write(write_csv([res.csv_row()], getattr(self.args, "out", None), f"n_limit={n_limit}"))
        else:
            self.header(family=f"{a},{b}", n_limit=n_limit)
            if getattr(self.args, "out", None):
                write_csv([res.csv_row()], self.args.out, f"n_limit={n_limit}")
            self.emit(f"{label}: N = {a}n + {b}, n = 0..{n_max}, checked {res.checked} (skipped {res.skipped})")
            if res.all_pass:
                self.emit(f"no counterexample with N <= {n_limit}")
            else:
                self.emit(f"{len(res.failures)} failure(s); first {min(len(res.failures), REPORT_FAILURE_CAP)}:")
                for rec in res.failure_records():
                    self.emit(f"  N={rec['N']} S mod 4 = {rec['S_mod4']}")
        return EXIT_OK if res.all_pass else EXIT_COUNTEREXAMPLE

    def _pairs_scan(self) -> int:
        args = self.args
        ckpt = args.resume or args.checkpoint or args.out.with_name(args.out.name + ".ckpt")
        table = self.table(args.n_limit)
        summary = scan_all_pairs(args.a_max, args.n_limit, table, checkpoint=ckpt,
                                 resume=args.resume is not None, jobs=args.jobs)
        write_csv(pair_rows(summary), args.out, f"a_max={args.a_max} n_limit={args.n_limit}")
        if args.failures:
            recs = [{"A": o.A, "B": o.B, "N": o.failure[0], "S_mod4": o.failure[1]}
                    for o in summary.outcomes if o.failure]
            Path(args.failures).write_text(failure_jsonl(recs))
        doc = {
            "a_max": args.a_max,
            "n_limit": args.n_limit,
            "pairs_tested": len(summary.outcomes),
            "passing_pairs": [list(p) for p in summary.passing_pairs],
            "structural_check": summary.structural_check,
            "structural_violations": [list(p) for p in summary.structural_violations],
        }
        if args.format == "json":
            self.emit(json.dumps(doc, sort_keys=True))
        else:
            self.header(a_max=args.a_max, n_limit=args.n_limit, jobs=args.jobs)
            self.emit(f"pairs tested: {doc['pairs_tested']}")
            self.emit(f"passing pairs (no counterexample with N <= {args.n_limit}): "
                      + " ".join(f"({a},{b})" for a, b in summary.passing_pairs))
            self.emit(f"all passing pairs have A = 0, B = 2 (mod 4): {summary.structural_check}")
            for a, b in summary.structural_violations:
                self.emit(f"  violation: ({a},{b})")
        return EXIT_OK if summary.structural_check else EXIT_COUNTEREXAMPLE

    def cmd_scan(self) -> int:
        kind = self.args.scan_kind
        if kind == "family":
            a, b = self.args.family
            return self._family_scan(a, b, self.args.n_limit, "family")
        if kind == "conjecture-16n6":
            return self._family_scan(16, 6, self.args.n_limit, "conjecture 16n+6")
        return self._pairs_scan()


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    runner = _Runner(args)
    try:
        return getattr(runner, f"cmd_{args.command}")()
    except _UsageError as exc:
        print(f"pcl-error kind=UsageError msg={json.dumps(str(exc))}", file=sys.stderr)
        return EXIT_USAGE
    except PclError as exc:
        code = next((c for cls, c in _EXIT_FOR.items() if isinstance(exc, cls)), EXIT_RESOURCE)
        print(f"pcl-error kind={type(exc).__name__} msg={json.dumps(str(exc))}", file=sys.stderr)
        return code
    except MemoryError:
        print('pcl-error kind=MemoryError msg="out of memory"', file=sys.stderr)
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
