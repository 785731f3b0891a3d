"""Evaluation of a single triple pattern against the store's indexes."""

from __future__ import annotations

from typing import Optional

import numpy as np

from mapsq.rdf_store import IndexOrder, TripleStore
from mapsq.sparql import TriplePattern, Var
from mapsq.table import BindingTable

# bound-position mask (s, p, o) -> index whose sort order has them as a prefix
_INDEX_FOR_BOUND = {
    (False, False, False): IndexOrder.SPO,
    (True, False, False): IndexOrder.SPO,
    (True, True, False): IndexOrder.SPO,
    (True, True, True): IndexOrder.SPO,
    (False, True, False): IndexOrder.POS,
    (False, True, True): IndexOrder.POS,
    (False, False, True): IndexOrder.OSP,
    (True, False, True): IndexOrder.OSP,
}


def select_index(pattern: TriplePattern) -> IndexOrder:
    bound = tuple(not isinstance(t, Var) for t in pattern)
    return _INDEX_FOR_BOUND[bound]


def _resolve_constants(store: TripleStore, pattern: TriplePattern) -> Optional[list[Optional[int]]]:
    """Term ids per position (None for variables), or None if a constant is unknown."""
    ids: list[Optional[int]] = []
    for t in pattern:
        if isinstance(t, Var):
            ids.append(None)
            continue
        tid = store.lookup(t)
        if tid is None:
            return None
        ids.append(tid)
    return ids


def _range(store: TripleStore, pattern: TriplePattern, ids: list[Optional[int]]):
    order = select_index(pattern)
    index = store.index(order)
    prefix = []
    for pos in order.positions:
        if ids[pos] is None:
            break
        prefix.append(ids[pos])
    lo, hi = index.prefix_range(tuple(prefix))
    return index, lo, hi


def pattern_cardinality(store: TripleStore, pattern: TriplePattern) -> int:
    """Number of triples matching the pattern's constants.

    Equality between repeated variables is not applied, so this is an upper
    bound for patterns such as ``?x p ?x`` and exact otherwise.
    """
    ids = _resolve_constants(store, pattern)
    if ids is None:
        return 0
    _, lo, hi = _range(store, pattern, ids)
    return hi - lo


def match_pattern(store: TripleStore, pattern: TriplePattern) -> BindingTable:
    """All bindings of the pattern's variables, in index order."""
    schema = pattern.variables()
    ids = _resolve_constants(store, pattern)
    if ids is None:
        return BindingTable(schema)
    index, lo, hi = _range(store, pattern, ids)
    triples = index.triples[lo:hi]

    first_pos: dict[str, int] = {}
    keep = None
    for pos, t in enumerate(pattern):
        if not isinstance(t, Var):
            continue
        if t.name in first_pos:
            eq = triples[:, pos] == triples[:, first_pos[t.name]]
            keep = eq if keep is None else keep & eq
        else:
            first_pos[t.name] = pos
    if keep is not None:
        triples = triples[keep]
    cols = [first_pos[v] for v in schema]
    return BindingTable(schema, np.ascontiguousarray(triples[:, cols]))
