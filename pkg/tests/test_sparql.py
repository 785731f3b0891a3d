import pytest
from hypothesis import given, settings, strategies as st

from helpers import QUERY_Q

from mapsq.errors import QuerySemanticError, QuerySyntaxError
from mapsq.rdf_store import IRI, Literal
from mapsq.sparql import Query, TriplePattern, Var, format_query, parse_query


def test_query_q():
    q = parse_query(QUERY_Q)
    assert q.projection == ("person",)
    assert q.patterns == (
        TriplePattern(Var("person"), IRI("hasJob"), Var("job")),
        TriplePattern(Var("job"), IRI("workAt"), Literal("Hospital")),
    )


def test_select_star():
    q = parse_query("SELECT * WHERE { ?s ?p ?o . }")
    assert q.select_all
    assert q.patterns == (TriplePattern(Var("s"), Var("p"), Var("o")),)
    assert q.output_variables() == ("s", "p", "o")


def test_unbound_projection_is_semantic_error():
    with pytest.raises(QuerySemanticError):
        parse_query("SELECT ?x WHERE { ?y p q . }")


@pytest.mark.parametrize("text", [
    "SELECT ?a WHERE { ?a <p> ?b }",
    "SELECT ?a WHERE { ?a <p> ?b . }",
    "select ?a where {?a <p> ?b.}",
    "SELECT ?a\nWHERE {\n  ?a <p> ?b .\n}\n",
])
def test_trailing_dot_and_layout_optional(text):
    assert parse_query(text) == Query(("a",), (TriplePattern(Var("a"), IRI("p"), Var("b")),))


def test_terms():
    q = parse_query('SELECT $x WHERE { <http://a/b#c> ?x "v"@en . ?x p "1"^^<http://t> . ?x p "q\\"x" }')
    s, _, o = q.patterns[0]
    assert s == IRI("http://a/b#c")
    assert o == Literal("v", lang="en")
    assert q.patterns[1].o == Literal("1", datatype="http://t")
    assert q.patterns[2].o == Literal('q"x')


def test_comments_ignored():
    q = parse_query("# leading\nSELECT ?a WHERE { ?a <p> ?b . # inline\n }")
    assert len(q.patterns) == 1


@pytest.mark.parametrize("text, line, column", [
    ("SELECT WHERE { ?a p ?b }", 1, 8),
    ("SELECT ?a { ?a p ?b }", 1, 11),
    ("SELECT ?a WHERE { ?a p }", 1, 24),
    ("SELECT ?a WHERE {\n  ?a p ?b ?c }", 2, 11),
    ("SELECT ?a WHERE { }", 1, 19),
    ("SELECT ?a WHERE { ?a p ?b } extra", 1, 29),
    ("SELECT ?a WHERE { ?a p ?b", 1, 26),
    ("SELECT ?a WHERE {\n ?a @ ?b }", 2, 5),
])
def test_syntax_errors_carry_position(text, line, column):
    with pytest.raises(QuerySyntaxError) as info:
        parse_query(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert f"line {line}, column {column}" in str(info.value)


def test_variables_first_appearance_and_repeats():
    q = parse_query("SELECT * WHERE { ?b p ?b . ?a ?b ?c }")
    assert q.patterns[0].variables() == ("b",)
    assert q.variables() == ("b", "a", "c")


def test_parse_is_pure():
    assert parse_query(QUERY_Q) == parse_query(QUERY_Q)


names = st.text("abcxyz_0", min_size=1, max_size=4)
consts = st.one_of(
    names.map(lambda n: IRI("http://e/" + n)),
    names.map(IRI),
    st.text(min_size=0, max_size=6).map(Literal),
    st.tuples(names, st.sampled_from(["en", "fr-CA"])).map(lambda t: Literal(t[0], lang=t[1])),
)
slot = st.one_of(names.map(Var), consts)


@st.composite
def queries(draw):
    pats = tuple(draw(st.lists(st.builds(TriplePattern, slot, slot, slot), min_size=1, max_size=4)))
    used = Query(None, pats).variables()
    if used and draw(st.booleans()):
        proj = tuple(draw(st.lists(st.sampled_from(used), min_size=1, max_size=len(used), unique=True)))
        return Query(proj, pats)
    return Query(None, pats)


@settings(max_examples=200, deadline=None)
@given(queries())
def test_printer_round_trip(q):
    assert parse_query(format_query(q)) == q
