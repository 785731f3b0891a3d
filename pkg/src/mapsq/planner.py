"""Join ordering and two-step evaluation of a basic graph pattern.

Every triple pattern is matched first (concurrently), then the partial
matches are folded left-deep through the join kernel.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from mapsq.backend import check_workers, parallel_map
from mapsq.errors import ContractError
from mapsq.matcher import match_pattern, pattern_cardinality
from mapsq.mrjoin import mr_join
from mapsq.oracle import nested_loop_join
from mapsq.rdf_store import TripleStore
from mapsq.sparql import Query
from mapsq.table import BindingTable, ResultSet

JoinFn = Callable[[BindingTable, BindingTable, int], BindingTable]


@dataclass(frozen=True)
class Match:
    pattern: int


@dataclass(frozen=True)
class Join:
    shared: tuple[str, ...]

    def __post_init__(self):
        if not self.shared:
            raise ValueError("a join step needs at least one shared variable")


@dataclass(frozen=True)
class Cross:
    pass


JoinStep = Union[Match, Join, Cross]


@dataclass(frozen=True)
class QueryPlan:
    """Left-deep plan: ``Match`` first, then ``(Match, Join | Cross)`` pairs.

    ``estimated_cards[i]`` is the row estimate after step ``i``. Match counts
    are exact index counts; a join is estimated as the smaller input, a cross
    product exactly.
    """

    steps: tuple[JoinStep, ...]
    estimated_cards: tuple[int, ...]

    def pattern_order(self) -> list[int]:
        return [s.pattern for s in self.steps if isinstance(s, Match)]


@dataclass
class Timings:
    match_ms: float = 0.0
    join_ms: float = 0.0
    joins: list[float] = field(default_factory=list)

    @property
    def total_ms(self) -> float:
        return self.match_ms + self.join_ms


def plan_bgp(store: TripleStore, query: Query) -> QueryPlan:
    """Greedy left-deep ordering by pattern cardinality.

    Start with the smallest pattern, then keep appending the smallest pattern
    that shares a variable with what has been joined so far. Patterns left
    unconnected are attached with a cross product. Ties go to the pattern
    written first.
    """
    pats = query.patterns
    cards = [pattern_cardinality(store, p) for p in pats]
    remaining = list(range(len(pats)))
    first = min(remaining, key=lambda i: (cards[i], i))
    remaining.remove(first)
    bound = set(pats[first].variables())
    steps: list[JoinStep] = [Match(first)]
    est = [cards[first]]
    while remaining:
        connected = [i for i in remaining if bound & set(pats[i].variables())]
        pick = min(connected or remaining, key=lambda i: (cards[i], i))
        remaining.remove(pick)
        shared = tuple(sorted(bound & set(pats[pick].variables())))
        steps.append(Match(pick))
        est.append(cards[pick])
        if shared:
            steps.append(Join(shared))
            est.append(min(est[-2], cards[pick]))
        else:
            steps.append(Cross())
            est.append(est[-2] * cards[pick])
        bound |= set(pats[pick].variables())
    return QueryPlan(tuple(steps), tuple(est))


def cross_product(a: BindingTable, b: BindingTable) -> BindingTable:
    """All concatenated row pairs, ``a``-major."""
    overlap = set(a.schema) & set(b.schema)
    if overlap:
        raise ContractError(f"cross product operands share variables {sorted(overlap)}")
    left = np.repeat(a.data, len(b), axis=0)
    right = np.tile(b.data, (len(a), 1))
    return BindingTable(a.schema + b.schema, np.hstack((left, right)))


def _nested(a: BindingTable, b: BindingTable, workers: int) -> BindingTable:
    return nested_loop_join(a, b)


JOINS: dict[str, JoinFn] = {"mr": mr_join, "nested": _nested}


def run_plan(store: TripleStore, plan: QueryPlan, query: Query, workers: int = 1,
             join: JoinFn = mr_join) -> tuple[BindingTable, Timings]:
    """Evaluate a plan to an unprojected binding table, timing both steps."""
    workers = check_workers(workers)
    timings = Timings()
    order = plan.pattern_order()
    if sorted(order) != list(range(len(query.patterns))):
        raise ContractError("plan does not cover every pattern of the query exactly once")

    t0 = time.perf_counter()
    matched = parallel_map(lambda i: match_pattern(store, query.patterns[i]), order, workers)
    timings.match_ms = (time.perf_counter() - t0) * 1e3

    tables = iter(matched)
    acc = next(tables)
    pending: Optional[BindingTable] = None
    for step in plan.steps[1:]:
        if isinstance(step, Match):
            pending = next(tables)
            continue
        t0 = time.perf_counter()
        if isinstance(step, Join):
            acc = join(acc, pending, workers)
        else:
            acc = cross_product(acc, pending)
        elapsed = (time.perf_counter() - t0) * 1e3
        timings.joins.append(elapsed)
        timings.join_ms += elapsed
    return acc, timings


def decode(store: TripleStore, table: BindingTable, variables: tuple[str, ...]) -> ResultSet:
    projected = table.project(variables)
    lut = np.empty(len(store.dictionary), dtype=object)
    lut[:] = store.dictionary.terms()
    return ResultSet(variables, map(tuple, lut[projected.data]) if len(projected) else ())


def execute(store: TripleStore, plan: QueryPlan, query: Query, workers: int = 1,
            join: JoinFn = mr_join) -> ResultSet:
    """Run ``plan`` and project onto the query's selected variables.

    ``SELECT *`` yields every variable in order of first appearance in the
    query text. Duplicate rows produced by the projection are kept.
    """
    table, _ = run_plan(store, plan, query, workers, join)
    return decode(store, table, query.output_variables())


def evaluate(store: TripleStore, query: Query, workers: int = 1, join: JoinFn = mr_join) -> ResultSet:
    return execute(store, plan_bgp(store, query), query, workers, join)
