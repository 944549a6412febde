"""Command-line front end: build/cache tables, query values and bounds, solve
exact games, measure algorithms, run verification suites.

Cache layout (directory from MERGE_LAB_CACHE, default ./.merge-lab):
  table-<max_m>x<max_n>.csv   adversary table, format v1 (checksummed)
  solve-<m>x<n>.json          exact-game strategy dump {m, n, value, moves}

Cached files are validated on load and ignored with a warning when corrupt.
Exit codes: 0 success/pass, 1 verification failure, 2 usage error,
3 coverage/budget, 4 I/O.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from . import adversary, tableio
from .algorithms import (
    BinaryInsertion,
    HwangLin,
    ModifiedBinaryMerge,
    OptimalPlayer,
    SelectorConfig,
    TapeMerge,
)
from .combinatorics import (
    ProblemKey,
    constraint_from_token,
    hwang_lin_formula,
    info_bound,
    tape_merge_worst,
)
from .errors import (
    BudgetExceededError,
    CoverageError,
    FormatError,
    InconsistentKeyError,
    MergeLabError,
)
from .game import DEFAULT_STATE_BUDGET, GameSolver, trusted_upper
from .harness import measure
from .verification import ALL_SUITES, run_suite

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_COVERAGE = 3
EXIT_IO = 4

_TABLE_RE = re.compile(r"table-(\d+)x(\d+)\.csv$")
_SOLVE_RE = re.compile(r"solve-(\d+)x(\d+)\.json$")


def cache_dir() -> Path:
    return Path(os.environ.get("MERGE_LAB_CACHE", ".merge-lab"))


def _warn(msg: str) -> None:
    print(f"merge-lab: {msg}", file=sys.stderr)


def _load_table_file(path: Path):
    try:
        return tableio.import_csv(path)
    except (FormatError, OSError, ValueError) as exc:
        _warn(f"ignoring corrupt cache file {path}: {exc}")
        return None


def load_covering_table(m: int, n: int):
    """Smallest cached table covering (m, n), or None."""
    best = None
    directory = cache_dir()
    if not directory.is_dir():
        return None
    for path in sorted(directory.iterdir()):
        match = _TABLE_RE.search(path.name)
        if not match:
            continue
        mm, nn = int(match.group(1)), int(match.group(2))
        if mm >= m and nn >= n:
            size = (mm + 1) * (nn + 1)
            if best is None or size < best[0]:
                best = (size, path)
    if best is None:
        return None
    return _load_table_file(best[1])


def _load_solve_cache(m: int, n: int) -> dict | None:
    path = cache_dir() / f"solve-{m}x{n}.json"
    if not path.is_file():
        return None
    try:
        data = json.loads(path.read_text())
        if (
            set(data) == {"m", "n", "value", "moves"}
            and data["m"] == m
            and data["n"] == n
            and isinstance(data["value"], int)
            and isinstance(data["moves"], list)
        ):
            return data
    except (ValueError, OSError) as exc:
        _warn(f"ignoring corrupt cache file {path}: {exc}")
    return None


def _cached_solve_values() -> dict:
    values = {}
    directory = cache_dir()
    if directory.is_dir():
        for path in sorted(directory.iterdir()):
            match = _SOLVE_RE.search(path.name)
            if match:
                data = _load_solve_cache(int(match.group(1)), int(match.group(2)))
                if data:
                    values[(data["m"], data["n"])] = data["value"]
    return values


def _write_solve_cache(dump: dict) -> None:
    directory = cache_dir()
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"solve-{dump['m']}x{dump['n']}.json"
    path.write_text(json.dumps(dump, sort_keys=True))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_tables(args) -> int:
    directory = cache_dir()
    path = directory / f"table-{args.max_m}x{args.max_n}.csv"
    table = None
    if not args.naive and path.is_file():
        table = _load_table_file(path)
        if table is not None:
            _warn(f"cache hit: {path}")
    if table is None:
        table = adversary.compute_tables(
            args.max_m, args.max_n, naive=args.naive, threads=args.threads
        )
        if not args.naive:
            try:
                directory.mkdir(parents=True, exist_ok=True)
                tableio.export_csv(table, path)
            except OSError as exc:
                _warn(f"could not write cache: {exc}")
    if args.out:
        try:
            tableio.export_csv(table, args.out)
        except OSError as exc:
            _warn(f"write failed: {exc}")
            return EXIT_IO
    print(f"table {table.max_m}x{table.max_n} ready")
    return EXIT_OK


def cmd_value(args) -> int:
    key = ProblemKey(
        args.m, args.n, constraint_from_token(args.left), constraint_from_token(args.right)
    )
    table = load_covering_table(args.m, args.n)
    if table is None:
        _warn(
            f"no cached table covers ({args.m},{args.n}); "
            f"run: merge-lab tables --max-m {args.m} --max-n {args.n}"
        )
        return EXIT_COVERAGE
    try:
        print(table.value(key))
    except InconsistentKeyError:
        print("invalid")
    return EXIT_OK


def cmd_exact(args) -> int:
    cached = _load_solve_cache(args.m, args.n)
    if cached is not None:
        value = cached["value"]
        dump = cached
    else:
        solver = GameSolver(state_budget=args.budget)
        outcome = solver.solve(args.m, args.n)
        if outcome.value is None:
            print("UNKNOWN(budget)")
            return EXIT_COVERAGE
        value = outcome.value
        dump = None
        if args.dump:
            dump = solver.dump_strategy(args.m, args.n)
            _write_solve_cache(dump)
    if args.dump:
        try:
            Path(args.dump).write_text(json.dumps(dump, sort_keys=True))
        except OSError as exc:
            _warn(f"write failed: {exc}")
            return EXIT_IO
    print(value)
    return EXIT_OK


def _build_algorithm(name: str, m: int, n: int):
    if name == "tape":
        return TapeMerge()
    if name == "binary-insertion":
        return BinaryInsertion()
    if name == "hwang-lin":
        return HwangLin()
    if name == "modified":
        return ModifiedBinaryMerge(SelectorConfig())
    if name == "optimal":
        solver = GameSolver()
        if solver.solve(m, n).value is None:
            raise BudgetExceededError(f"solve({m},{n}) exceeded the state budget")
        return OptimalPlayer(solver)
    raise MergeLabError(f"unknown algorithm {name!r}")


def cmd_measure(args) -> int:
    try:
        alg = _build_algorithm(args.alg, args.m, args.n)
        result = measure(alg, args.m, args.n)
    except BudgetExceededError as exc:
        _warn(str(exc))
        return EXIT_COVERAGE
    except MergeLabError as exc:
        _warn(str(exc))
        return EXIT_USAGE
    print(
        f"alg={args.alg} m={args.m} n={args.n} worst={result.worst_case} "
        f"leaves={result.leaves} correct={str(result.correct).lower()}"
    )
    if not result.correct:
        for transcript, reason in result.failures:
            _warn(f"failure: {reason}")
        return EXIT_VERIFY_FAIL
    return EXIT_OK


def _best_proven_upper(m: int, n: int) -> tuple[int, str]:
    lo, hi = min(m, n), max(m, n)
    if lo == 0:
        return 0, "tape"
    options = [(tape_merge_worst(lo, hi), "tape"), (hwang_lin_formula(lo, hi), "hwang-lin")]
    if hi >= 2 * lo - 2 and (hi - 2 * lo) % 2 == 0:
        k = (hi - 2 * lo) // 2
        if lo >= 3 and k >= -1:
            options.append((3 * lo + k - 2, "thm-6.1"))
        if lo >= 7 and k == -1:
            options.append((3 * lo - 4, "thm-6.3"))
        if lo >= 10 and k == 0:
            options.append((3 * lo - 3, "thm-6.4"))
    if hi >= 2 * lo - 3 and (hi - 2 * lo) % 2 == 1:
        k = (hi - 2 * lo + 1) // 2
        if lo >= 5 and k >= -1:
            options.append((3 * lo + k - 3, "thm-6.2"))
    t = trusted_upper(lo, hi)
    if t is not None:
        options.append((t, "trusted"))
    return min(options)


def cmd_bounds(args) -> int:
    m, n = args.m, args.n
    print(f"info {info_bound(m, n)}")
    table = load_covering_table(m, n)
    if table is not None:
        print(f"adversary {table.value(ProblemKey(m, n))}")
    upper, source = _best_proven_upper(m, n)
    print(f"upper {upper} via={source}")
    cached = _load_solve_cache(m, n) or _load_solve_cache(n, m)
    if cached is not None:
        print(f"exact {cached['value']}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in ALL_SUITES:
        _warn(f"unknown suite {args.suite!r}; known: all, {', '.join(ALL_SUITES)}")
        return EXIT_USAGE
    size = args.max_size
    table = load_covering_table(size, size)
    if table is None:
        _warn(
            f"no cached table covers {size}x{size}; "
            f"run: merge-lab tables --max-m {size} --max-n {size}"
        )
        return EXIT_COVERAGE
    solver_values = _cached_solve_values()
    audit_bases = None
    if args.suite == "all" or args.suite.startswith("thm-6."):
        audit_bases = _collect_audit_bases(args.budget)
    try:
        report = run_suite(
            args.suite,
            table,
            limits=(size, size),
            solver_values=solver_values,
            audit_bases=audit_bases,
            audit_m_limit=max(60, size),
        )
    except CoverageError as exc:
        _warn(str(exc))
        return EXIT_COVERAGE
    for suite in report.suites:
        line = f"{suite.status.upper()} {suite.id} checked={suite.checked}"
        if suite.counterexamples:
            line += f" counterexamples={suite.counterexamples}"
        if suite.trusted:
            line += f" trusted={suite.trusted}"
        print(line)
    if args.report:
        try:
            Path(args.report).write_bytes(report.to_json_bytes())
        except OSError as exc:
            _warn(f"write failed: {exc}")
            return EXIT_IO
    return EXIT_VERIFY_FAIL if report.failed else EXIT_OK


def _collect_audit_bases(budget: int) -> dict:
    """Base facts for the recurrence audit: trusted optima plus solver values
    for the small base rows, solved once and kept in the solve cache."""
    from .verification import default_audit_bases

    bases = {}
    solver = None
    needed = [(3, n) for n in range(4, 13)] + [(5, n) for n in range(7, 22)]
    for m, n in needed:
        cached = _load_solve_cache(m, n)
        if cached is not None:
            bases[(m, n)] = (cached["value"], "computed")
            continue
        if solver is None:
            solver = GameSolver(state_budget=budget)
        out = solver.solve(m, n)
        if out.value is not None:
            bases[(m, n)] = (out.value, "computed")
            try:
                _write_solve_cache(solver.dump_strategy(m, n))
            except (OSError, BudgetExceededError):
                pass
    for key, val in default_audit_bases(None).items():
        bases.setdefault(key, val)
    return bases


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="merge-lab",
        description="minimum-comparison merging laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="build or load the adversary-bound tables")
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--out", help="also export the table CSV here")
    p.add_argument("--naive", action="store_true", help="enumeration oracle (testing only)")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(fn=cmd_tables)

    p = sub.add_parser("value", help="query one adversary-bound value")
    p.add_argument("--left", required=True, choices=["dot", "bs", "fs"])
    p.add_argument("--right", required=True, choices=["dot", "bs", "fs"])
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(fn=cmd_value)

    p = sub.add_parser("exact", help="solve the exact merge game")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET)
    p.add_argument("--dump", help="write the optimal-strategy JSON here")
    p.set_defaults(fn=cmd_exact)

    p = sub.add_parser("measure", help="exhaustively measure an algorithm")
    p.add_argument(
        "--alg",
        required=True,
        choices=["tape", "binary-insertion", "hwang-lin", "modified", "optimal"],
    )
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(fn=cmd_measure)

    p = sub.add_parser("bounds", help="print known bounds for one problem")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("verify", help="run claim-verification suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--max-size", type=int, default=40)
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CoverageError as exc:
        _warn(str(exc))
        return EXIT_COVERAGE
    except BudgetExceededError as exc:
        _warn(str(exc))
        return EXIT_COVERAGE
    except OSError as exc:
        _warn(str(exc))
        return EXIT_IO
    except MergeLabError as exc:
        _warn(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
