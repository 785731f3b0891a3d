"""Slow reference evaluators.

Nothing here reuses the join kernel or the pattern matcher: the nested-loop
join compares every row pair, and the brute-force evaluator enumerates
variable assignments and checks each pattern against the raw triple set.
They serve as test oracles and as the plain-join baseline in benchmarks.
"""

from __future__ import annotations

from math import prod
from typing import Optional

import numpy as np

from mapsq.errors import BudgetExceeded, ContractError
from mapsq.rdf_store import TripleStore
from mapsq.sparql import Query, Var
from mapsq.table import BindingTable, ResultSet

DEFAULT_BUDGET = 10**7


def nested_loop_join(a: BindingTable, b: BindingTable) -> BindingTable:
    """Join by comparing each row of ``a`` with every row of ``b``.

    Output columns are the shared variables (sorted by name), then the rest of
    ``a``, then the rest of ``b``; rows are sorted lexicographically, which
    matches the MapReduce join's ordering.
    """
    shared = sorted(set(a.schema) & set(b.schema))
    if not shared:
        raise ContractError(f"no shared variable between {a.schema} and {b.schema}")
    a_rest = [v for v in a.schema if v not in shared]
    b_rest = [v for v in b.schema if v not in shared]
    a_key = a.data[:, [a.schema.index(v) for v in shared]]
    b_key = b.data[:, [b.schema.index(v) for v in shared]]
    a_val = a.data[:, [a.schema.index(v) for v in a_rest]]
    b_val = b.data[:, [b.schema.index(v) for v in b_rest]]

    out = []
    for i in range(len(a)):
        # row i against all of b: |b| key comparisons
        hits = np.flatnonzero(np.all(b_key == a_key[i], axis=1))
        if len(hits):
            left = np.broadcast_to(np.concatenate((a_key[i], a_val[i])), (len(hits), len(shared) + len(a_rest)))
            out.append(np.hstack((left, b_val[hits])))
    schema = tuple(shared) + tuple(a_rest) + tuple(b_rest)
    if not out:
        return BindingTable(schema)
    data = np.concatenate(out)
    order = np.lexsort(data.T[::-1])
    return BindingTable(schema, data[order])


def evaluate_bruteforce(store: TripleStore, query: Query, budget: Optional[int] = DEFAULT_BUDGET) -> ResultSet:
    """Answer ``query`` by enumerating assignments of its variables.

    Each variable ranges over the terms that occur in every position it is
    used in (subjects for ``?x p o``, etc). Raises ``BudgetExceeded`` when the
    size of that assignment space is above ``budget``.
    """
    variables = list(query.variables())
    out_vars = query.output_variables()
    triples = set(store.triples())
    by_position = [set(), set(), set()]
    for t in triples:
        for pos in range(3):
            by_position[pos].add(t[pos])

    patterns = []
    for pat in query.patterns:
        resolved = []
        for t in pat:
            if isinstance(t, Var):
                resolved.append(t)
            else:
                tid = store.lookup(t)
                if tid is None:
                    return ResultSet(out_vars)
                resolved.append(tid)
        patterns.append(resolved)

    domains: dict[str, set] = {}
    for resolved in patterns:
        for pos, t in enumerate(resolved):
            if isinstance(t, Var):
                dom = domains.get(t.name)
                domains[t.name] = set(by_position[pos]) if dom is None else dom & by_position[pos]
    ordered = {v: sorted(domains[v]) for v in variables}
    space = prod(len(d) for d in ordered.values())
    if budget is not None and space > budget:
        raise BudgetExceeded(f"{space} candidate assignments exceed the budget of {budget}")

    # a pattern is checked as soon as its last variable is assigned
    ready_at: dict[int, list] = {i: [] for i in range(len(variables) + 1)}
    for resolved in patterns:
        names = {t.name for t in resolved if isinstance(t, Var)}
        depth = max((variables.index(n) + 1 for n in names), default=0)
        ready_at[depth].append(resolved)

    def holds(resolved, binding) -> bool:
        triple = tuple(binding[t.name] if isinstance(t, Var) else t for t in resolved)
        return triple in triples

    solutions = []
    binding: dict[str, int] = {}

    def extend(depth: int) -> None:
        if not all(holds(p, binding) for p in ready_at[depth]):
            return
        if depth == len(variables):
            solutions.append(tuple(binding[v] for v in out_vars))
            return
        var = variables[depth]
        for tid in ordered[var]:
            binding[var] = tid
            extend(depth + 1)
        binding.pop(var, None)

    extend(0)
    return ResultSet(out_vars, [tuple(store.resolve(t) for t in row) for row in solutions])
