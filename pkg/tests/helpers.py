"""Random instances shared by the property and acceptance tests."""

import numpy as np

from mapsq.rdf_store import IRI, Literal, TripleStore
from mapsq.sparql import Query, TriplePattern, Var
from mapsq.table import BindingTable

# The hospital example graph. The workAt lines come first so that the dense ids
# of Doctor < Nurse < Proffesor follow the alphabetical order of the example.
HOSPITAL_NT = b"""\
<Doctor> <workAt> "Hospital" .
<Nurse> <workAt> "Hospital" .
<Anny> <hasJob> <Proffesor> .
<Jim> <hasJob> <Doctor> .
<Susan> <hasJob> <Nurse> .
"""

QUERY_Q = 'SELECT ?person WHERE { ?person hasJob ?job. ?job workAt "Hospital".}'

VAR_POOL = ("a", "b", "c", "d")


def random_join_pair(rng, n_shared=None, key_domain=5, max_rows=200):
    """Two tables sharing 1-2 variables; shared columns drawn from ``key_domain`` values."""
    n_shared = n_shared or int(rng.integers(1, 3))
    shared = [f"k{i}" for i in range(n_shared)]
    left = shared + [f"l{i}" for i in range(int(rng.integers(0, 3)))]
    right = [f"r{i}" for i in range(int(rng.integers(0, 3)))] + shared
    rng.shuffle(left)
    rng.shuffle(right)

    def table(schema):
        n = int(rng.integers(0, max_rows + 1))
        data = np.empty((n, len(schema)), np.int64)
        for j, v in enumerate(schema):
            high = key_domain if v.startswith("k") else 1000
            data[:, j] = rng.integers(0, high, n)
        return BindingTable(schema, data)

    return table(left), table(right)


def random_store(rng, max_triples=2000):
    n_entities = int(rng.integers(3, 41))
    n_preds = int(rng.integers(1, 5))
    n_literals = int(rng.integers(0, 4))
    entities = [IRI(f"e{i}") for i in range(n_entities)]
    preds = [IRI(f"p{i}") for i in range(n_preds)]
    objects = entities + [Literal(f"lit{i}") for i in range(n_literals)]
    n = int(rng.integers(0, max_triples + 1)) if rng.random() < 0.3 else int(rng.integers(0, 300))
    triples = [(entities[rng.integers(n_entities)], preds[rng.integers(n_preds)], objects[rng.integers(len(objects))])
               for _ in range(n)]
    return TripleStore.from_terms(triples), entities, preds, objects


def random_query(rng, entities, preds, objects, max_patterns=4):
    n_vars = int(rng.integers(1, len(VAR_POOL) + 1))
    pool = VAR_POOL[:n_vars]

    def pick(choices, var_prob):
        if rng.random() < var_prob:
            return Var(pool[rng.integers(len(pool))])
        if rng.random() < 0.05:
            return IRI("missing")
        return choices[rng.integers(len(choices))]

    patterns = []
    for _ in range(int(rng.integers(1, max_patterns + 1))):
        patterns.append(TriplePattern(pick(entities, 0.7), pick(preds, 0.3), pick(objects, 0.6)))
    query = Query(None, tuple(patterns))
    used = list(query.variables())
    if not used or rng.random() < 0.3:
        return query
    k = int(rng.integers(1, len(used) + 1))
    projection = tuple(rng.permutation(used)[:k].tolist())
    return Query(projection, tuple(patterns))


def same_multiset(a, b):
    """Multiset equality of two binding tables over the same schema, via sorted rows."""
    if a.schema != b.schema or len(a) != len(b):
        return False
    if len(a) == 0 or not a.schema:
        return True
    sa = a.data[np.lexsort(a.data.T[::-1])]
    sb = b.data[np.lexsort(b.data.T[::-1])]
    return bool(np.array_equal(sa, sb))
