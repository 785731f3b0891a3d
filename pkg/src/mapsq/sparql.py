"""Parser for the supported SPARQL subset: SELECT over one basic graph pattern.

Grammar::

    query    := SELECT (var+ | '*') WHERE '{' pattern ('.' pattern)* '.'? '}'
    pattern  := term term term
    term     := ?var | $var | <iri> | bare-identifier | "literal"[@lang | ^^<iri>]

Bare identifiers such as ``hasJob`` are read as IRIs; there is no PREFIX
support, IRIs are taken verbatim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Union

from mapsq.errors import QuerySemanticError, QuerySyntaxError
from mapsq.rdf_store import IRI, Literal, Term, TermKind, unescape_string


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("empty variable name")

    def __str__(self) -> str:
        return f"?{self.name}"


TermOrVar = Union[Term, Var]


@dataclass(frozen=True)
class TriplePattern:
    s: TermOrVar
    p: TermOrVar
    o: TermOrVar

    def __iter__(self) -> Iterator[TermOrVar]:
        return iter((self.s, self.p, self.o))

    def variables(self) -> tuple[str, ...]:
        """Variable names in (s, p, o) order, repeats collapsed."""
        seen: list[str] = []
        for t in self:
            if isinstance(t, Var) and t.name not in seen:
                seen.append(t.name)
        return tuple(seen)


@dataclass(frozen=True)
class Query:
    """A parsed query. ``projection`` is None for ``SELECT *``."""

    projection: Optional[tuple[str, ...]]
    patterns: tuple[TriplePattern, ...]

    @property
    def select_all(self) -> bool:
        return self.projection is None

    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for pat in self.patterns:
            for v in pat.variables():
                seen.setdefault(v)
        return tuple(seen)

    def output_variables(self) -> tuple[str, ...]:
        return self.variables() if self.projection is None else self.projection


class _Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


_TOKEN_SPEC = [
    ("WS", r"[ \t\r\n]+"),
    ("COMMENT", r"#[^\n]*"),
    ("VAR", r"[?$][A-Za-z0-9_]+"),
    ("IRI", r"<[^<>\"{}|^`\\\s]*>"),
    ("LITERAL", r'"(?:[^"\\\n\r]|\\.)*"(?:@[A-Za-z]+(?:-[A-Za-z0-9]+)*|\^\^<[^<>\"{}|^`\\\s]*>)?'),
    ("NAME", r"[A-Za-z][A-Za-z0-9_\-:/#]*"),
    ("LBRACE", r"\{"),
    ("RBRACE", r"\}"),
    ("DOT", r"\."),
    ("STAR", r"\*"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{rx})" for name, rx in _TOKEN_SPEC))
_LITERAL_PARTS = re.compile(r'"((?:[^"\\]|\\.)*)"(?:@(.+)|\^\^<(.*)>)?', re.S)


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QuerySyntaxError(line, pos - line_start + 1, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind not in ("WS", "COMMENT"):
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = pos + m.group().rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("EOF", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, tok: _Token, message: str) -> QuerySyntaxError:
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return QuerySyntaxError(tok.line, tok.column, f"{message}, found {found}")

    def keyword(self, word: str) -> None:
        tok = self.advance()
        if tok.kind != "NAME" or tok.text.upper() != word:
            raise self.error(tok, f"expected {word}")

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.advance()
        if tok.kind != kind:
            raise self.error(tok, f"expected {what}")
        return tok

    def term(self) -> TermOrVar:
        tok = self.advance()
        if tok.kind == "VAR":
            return Var(tok.text[1:])
        if tok.kind == "IRI":
            return IRI(tok.text[1:-1])
        if tok.kind == "NAME":
            return IRI(tok.text)
        if tok.kind == "LITERAL":
            value, lang, datatype = _LITERAL_PARTS.fullmatch(tok.text).groups()
            try:
                value = unescape_string(value)
            except ValueError as exc:
                raise QuerySyntaxError(tok.line, tok.column, str(exc)) from None
            return Literal(value, lang=lang, datatype=datatype)
        raise self.error(tok, "expected a term or variable")

    def query(self) -> Query:
        self.keyword("SELECT")
        projection: Optional[list[_Token]]
        if self.peek().kind == "STAR":
            self.advance()
            projection = None
        else:
            projection = []
            while self.peek().kind == "VAR":
                tok = self.advance()
                projection.append(_Token(tok.kind, tok.text[1:], tok.line, tok.column))
            if not projection:
                raise self.error(self.peek(), "expected '*' or a variable")
        self.keyword("WHERE")
        self.expect("LBRACE", "'{'")
        patterns = [TriplePattern(self.term(), self.term(), self.term())]
        while True:
            tok = self.advance()
            if tok.kind == "RBRACE":
                break
            if tok.kind != "DOT":
                raise self.error(tok, "expected '.' or '}'")
            if self.peek().kind == "RBRACE":
                self.advance()
                break
            patterns.append(TriplePattern(self.term(), self.term(), self.term()))
        self.expect("EOF", "end of query")

        query = Query(None if projection is None else tuple(t.text for t in projection), tuple(patterns))
        if projection is not None:
            bound = set(query.variables())
            for tok in projection:
                if tok.text not in bound:
                    raise QuerySemanticError(
                        f"projected variable ?{tok.text} (line {tok.line}, column {tok.column}) "
                        "does not appear in any triple pattern")
        return query


def parse_query(text: str) -> Query:
    return _Parser(text).query()


def format_term(t: TermOrVar) -> str:
    if isinstance(t, Var):
        return str(t)
    if t.kind is TermKind.BLANK:
        # blank nodes only arise from data; the grammar has no syntax for them
        raise ValueError("blank node constants cannot be written in a query")
    return t.to_ntriples()


def format_query(query: Query) -> str:
    """Serialize a query back to text accepted by ``parse_query``."""
    head = "*" if query.projection is None else " ".join(f"?{v}" for v in query.projection)
    body = " ".join(" ".join(format_term(t) for t in pat) + " ." for pat in query.patterns)
    return f"SELECT {head} WHERE {{ {body} }}"
