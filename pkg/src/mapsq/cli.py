"""Command line: ``query``, ``bench`` and ``generate`` subcommands.

Exit codes: 0 success, 1 input error (bad arguments, unreadable or malformed
data or query), 2 the engines disagreed on a result cardinality.
"""

from __future__ import annotations

import argparse
import statistics
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from mapsq.backend import WORKERS_ENV, default_workers
from mapsq.errors import MapsqError
from mapsq.generator import GenConfig, generate
from mapsq.oracle import evaluate_bruteforce
from mapsq.planner import JOINS, execute, plan_bgp, run_plan
from mapsq.rdf_store import TripleStore, load_ntriples_file
from mapsq.sparql import Query, parse_query
from mapsq.table import ResultSet

EXIT_OK, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def bundled_queries() -> list[Path]:
    root = resources.files("mapsq") / "queries"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".rq"))


def run_query(store: TripleStore, query: Query, engine: str, workers: int) -> ResultSet:
    if engine == "brute":
        return evaluate_bruteforce(store, query)
    return execute(store, plan_bgp(store, query), query, workers, JOINS[engine])


def format_results(results: ResultSet) -> str:
    lines = ["\t".join(f"?{v}" for v in results.schema)]
    lines.extend("\t".join(str(t) for t in row) for row in results.rows)
    return "\n".join(lines) + "\n"


def cmd_query(args) -> int:
    text = args.inline if args.inline is not None else Path(args.query).read_text(encoding="utf-8")
    query = parse_query(text)
    store = load_ntriples_file(args.data)
    sys.stdout.write(format_results(run_query(store, query, args.engine, args.workers)))
    return EXIT_OK


@dataclass
class BenchReport:
    query: str
    workers: int
    rows: int
    match_ms: float
    join_ms: float
    total_ms: float
    baseline_match_ms: float
    baseline_join_ms: float
    baseline_total_ms: float

    @property
    def speedup(self) -> float:
        # a query without joins has nothing to speed up
        if self.join_ms <= 0 or self.baseline_join_ms <= 0:
            return 1.0
        return self.baseline_join_ms / self.join_ms

    def csv_lines(self) -> list[str]:
        mr = (f"query={self.query},engine=mr,workers={self.workers},rows={self.rows},"
              f"match_ms={self.match_ms:.3f},join_ms={self.join_ms:.3f},total_ms={self.total_ms:.3f},"
              f"speedup={self.speedup:.3f}")
        base = (f"query={self.query},engine=nested,workers=1,rows={self.rows},"
                f"match_ms={self.baseline_match_ms:.3f},join_ms={self.baseline_join_ms:.3f},"
                f"total_ms={self.baseline_total_ms:.3f}")
        return [mr, base]


class EngineDisagreement(Exception):
    pass


def bench_query(store: TripleStore, name: str, query: Query, workers: int, reps: int) -> BenchReport:
    """Median timings of ``reps`` runs per engine; raises if cardinalities differ."""
    plan = plan_bgp(store, query)
    samples = {}
    rows = {}
    for engine, w in (("mr", workers), ("nested", 1)):
        runs = []
        for _ in range(reps):
            table, timings = run_plan(store, plan, query, w, JOINS[engine])
            rows.setdefault(engine, set()).add(len(table))
            runs.append(timings)
        samples[engine] = runs
    cards = rows["mr"] | rows["nested"]
    if len(cards) != 1:
        raise EngineDisagreement(f"{name}: mr rows {sorted(rows['mr'])} vs nested rows {sorted(rows['nested'])}")

    def median(engine, attr):
        return statistics.median(getattr(t, attr) for t in samples[engine])

    return BenchReport(
        query=name, workers=workers, rows=cards.pop(),
        match_ms=median("mr", "match_ms"), join_ms=median("mr", "join_ms"),
        total_ms=median("mr", "total_ms"), baseline_match_ms=median("nested", "match_ms"),
        baseline_join_ms=median("nested", "join_ms"),
        baseline_total_ms=median("nested", "total_ms"))


def format_bench(reports: Sequence[BenchReport]) -> str:
    header = f"{'query':<12}{'rows':>10}{'match ms':>12}{'mr join ms':>13}{'nl join ms':>13}{'total ms':>12}{'speedup':>9}"
    lines = [header, "-" * len(header)]
    for r in reports:
        lines.append(f"{r.query:<12}{r.rows:>10}{r.match_ms:>12.2f}{r.join_ms:>13.2f}"
                     f"{r.baseline_join_ms:>13.2f}{r.total_ms:>12.2f}{r.speedup:>9.2f}")
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    store = load_ntriples_file(args.data)
    paths = [Path(q) for q in args.queries] if args.queries else bundled_queries()
    queries = [(p.stem, parse_query(p.read_text(encoding="utf-8"))) for p in paths]
    try:
        reports = [bench_query(store, name, q, args.workers, args.reps) for name, q in queries]
    except EngineDisagreement as exc:
        print(f"error: engines disagree on result cardinality: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    sys.stdout.write(format_bench(reports))
    for r in reports:
        print("\n".join(r.csv_lines()))
    return EXIT_OK


def cmd_generate(args) -> int:
    n = generate(GenConfig(args.universities, args.seed, args.out))
    print(f"wrote {n} triples to {args.out}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mapsq", description="SPARQL BGP engine with a MapReduce-style join.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    workers_help = f"worker threads (default: ${WORKERS_ENV} or 1)"

    q = sub.add_parser("query", help="load N-Triples data and answer one query")
    q.add_argument("--data", required=True)
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--query", help="file holding the query")
    src.add_argument("--inline", help="query text")
    q.add_argument("--workers", type=_positive, default=None, help=workers_help)
    q.add_argument("--engine", choices=("mr", "nested", "brute"), default="mr")
    q.set_defaults(func=cmd_query)

    b = sub.add_parser("bench", help="time the MapReduce join against the nested-loop join")
    b.add_argument("--data", required=True)
    b.add_argument("--queries", nargs="+", help="query files (default: the bundled q1-q5)")
    b.add_argument("--workers", type=_positive, default=None, help=workers_help)
    b.add_argument("--reps", type=_positive, default=3)
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("generate", help="write a synthetic university dataset")
    g.add_argument("--universities", type=_positive, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "workers", 0) is None:
            args.workers = default_workers()
        return args.func(args)
    except (MapsqError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
