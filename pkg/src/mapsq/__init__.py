"""SPARQL basic-graph-pattern engine built around a MapReduce-style join."""

from mapsq.errors import (BudgetExceeded, ContractError, MapsqError, NTriplesParseError,
                          QuerySemanticError, QuerySyntaxError, UnknownTermId)
from mapsq.matcher import match_pattern, pattern_cardinality, select_index
from mapsq.mrjoin import (EntryBatch, Flag, JoinSpec, KeyedEntry, map_phase, mr_join,
                          reduce_duplicate_phase, sort_phase)
from mapsq.oracle import evaluate_bruteforce, nested_loop_join
from mapsq.planner import (Cross, Join, Match, QueryPlan, cross_product, evaluate, execute,
                           plan_bgp)
from mapsq.rdf_store import (IRI, BlankNode, Dictionary, IndexOrder, Literal, Term, TermKind,
                             Triple, TripleStore, intern, load_ntriples, load_ntriples_file,
                             resolve)
from mapsq.sparql import Query, TriplePattern, Var, format_query, parse_query
from mapsq.table import BindingTable, ResultSet

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "ContractError", "MapsqError", "NTriplesParseError", "QuerySemanticError",
    "QuerySyntaxError", "UnknownTermId",
    "match_pattern", "pattern_cardinality", "select_index",
    "EntryBatch", "Flag", "JoinSpec", "KeyedEntry", "map_phase", "mr_join",
    "reduce_duplicate_phase", "sort_phase",
    "evaluate_bruteforce", "nested_loop_join",
    "Cross", "Join", "Match", "QueryPlan", "cross_product", "evaluate", "execute", "plan_bgp",
    "IRI", "BlankNode", "Dictionary", "IndexOrder", "Literal", "Term", "TermKind", "Triple",
    "TripleStore", "intern", "load_ntriples", "load_ntriples_file", "resolve",
    "Query", "TriplePattern", "Var", "format_query", "parse_query",
    "BindingTable", "ResultSet",
]
