import pytest

from helpers import QUERY_Q, HOSPITAL_NT

from mapsq.rdf_store import load_ntriples
from mapsq.sparql import parse_query


@pytest.fixture
def hospital_store():
    return load_ntriples(HOSPITAL_NT)


@pytest.fixture
def query_q():
    return parse_query(QUERY_Q)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in sorted(RESULTS.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
