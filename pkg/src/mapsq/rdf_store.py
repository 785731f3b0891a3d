"""Dictionary-encoded in-memory triple store.

Terms are interned into dense integer ids in first-seen order. The distinct
triples are kept three times, sorted as SPO, POS and OSP, so any combination
of bound positions in a triple pattern maps to a contiguous range of one index.
"""

from __future__ import annotations

import enum
import io
import os
import re
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator, NamedTuple, Optional, Union

import numpy as np

from mapsq.errors import NTriplesParseError, UnknownTermId

TermId = int


class TermKind(str, enum.Enum):
    IRI = "iri"
    LITERAL = "literal"
    BLANK = "blank"


@dataclass(frozen=True)
class Term:
    """An RDF term.

    Literals carry their language tag or datatype as part of ``lexical``:
    a plain literal is stored as its bare value, a tagged one as
    ``"value"@lang`` or ``"value"^^<datatype>``.
    """

    kind: TermKind
    lexical: str

    def __post_init__(self):
        if not self.lexical and self.kind is not TermKind.LITERAL:
            raise ValueError(f"empty lexical form for {self.kind.value} term")

    def __str__(self) -> str:
        return self.lexical

    def to_ntriples(self) -> str:
        if self.kind is TermKind.IRI:
            return f"<{self.lexical}>"
        if self.kind is TermKind.BLANK:
            return f"_:{self.lexical}"
        m = _TAGGED_LEXICAL.fullmatch(self.lexical)
        if m:
            return f'"{_escape(m.group(1))}"{m.group(2)}'
        return f'"{_escape(self.lexical)}"'


def IRI(value: str) -> Term:
    return Term(TermKind.IRI, value)


def Literal(value: str, lang: Optional[str] = None, datatype: Optional[str] = None) -> Term:
    if lang is not None:
        return Term(TermKind.LITERAL, f'"{value}"@{lang}')
    if datatype is not None:
        return Term(TermKind.LITERAL, f'"{value}"^^<{datatype}>')
    return Term(TermKind.LITERAL, value)


def BlankNode(label: str) -> Term:
    return Term(TermKind.BLANK, label)


class Triple(NamedTuple):
    s: TermId
    p: TermId
    o: TermId


class Dictionary:
    """Bijection between terms and dense ids."""

    def __init__(self):
        self._terms: list[Term] = []
        self._ids: dict[Term, TermId] = {}

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, term: Term) -> bool:
        return term in self._ids

    def intern(self, term: Term) -> TermId:
        tid = self._ids.get(term)
        if tid is None:
            tid = len(self._terms)
            self._ids[term] = tid
            self._terms.append(term)
        return tid

    def lookup(self, term: Term) -> Optional[TermId]:
        return self._ids.get(term)

    def resolve(self, tid: TermId) -> Term:
        if not 0 <= tid < len(self._terms):
            raise UnknownTermId(tid)
        return self._terms[tid]

    def terms(self) -> list[Term]:
        return list(self._terms)


class IndexOrder(enum.Enum):
    """Permutation of (s, p, o) positions defining an index's sort order."""

    SPO = (0, 1, 2)
    POS = (1, 2, 0)
    OSP = (2, 0, 1)

    @property
    def positions(self) -> tuple[int, int, int]:
        return self.value


class PermutationIndex:
    def __init__(self, order: IndexOrder, spo: np.ndarray):
        self.order = order
        a, b, c = order.positions
        perm = np.lexsort((spo[:, c], spo[:, b], spo[:, a]))
        self.triples = spo[perm]
        self.columns = tuple(np.ascontiguousarray(self.triples[:, pos]) for pos in order.positions)

    def __len__(self) -> int:
        return len(self.triples)

    def prefix_range(self, prefix: tuple[int, ...]) -> tuple[int, int]:
        """Half-open row range whose leading columns equal ``prefix``."""
        lo, hi = 0, len(self.triples)
        for col, value in zip(self.columns, prefix):
            seg = col[lo:hi]
            new_lo = lo + int(np.searchsorted(seg, value, side="left"))
            hi = lo + int(np.searchsorted(seg, value, side="right"))
            lo = new_lo
            if lo == hi:
                break
        return lo, hi


class TripleStore:
    """Immutable set of triples over a dictionary, with SPO/POS/OSP indexes.

    The dictionary may keep growing through ``intern`` (query constants,
    fixtures), but the triple set is fixed at construction.
    """

    def __init__(self, dictionary: Dictionary, triples: Union[np.ndarray, Iterable[tuple[int, int, int]]]):
        arr = np.asarray(triples if isinstance(triples, np.ndarray) else list(triples), dtype=np.int64)
        arr = arr.reshape(-1, 3)
        if len(arr) and (arr.min() < 0 or arr.max() >= len(dictionary)):
            raise ValueError("triple references an id missing from the dictionary")
        # np.unique over rows sorts lexicographically, which is SPO order
        spo = np.unique(arr, axis=0) if len(arr) else arr
        self.dictionary = dictionary
        self._indexes = {order: PermutationIndex(order, spo) for order in IndexOrder}

    @classmethod
    def from_terms(cls, triples: Iterable[tuple[Term, Term, Term]]) -> "TripleStore":
        d = Dictionary()
        ids = [(d.intern(s), d.intern(p), d.intern(o)) for s, p, o in triples]
        return cls(d, ids)

    @property
    def count(self) -> int:
        return len(self._indexes[IndexOrder.SPO])

    def __len__(self) -> int:
        return self.count

    def index(self, order: IndexOrder) -> PermutationIndex:
        return self._indexes[order]

    def triples(self) -> Iterator[Triple]:
        for s, p, o in self._indexes[IndexOrder.SPO].triples.tolist():
            yield Triple(s, p, o)

    def intern(self, term: Term) -> TermId:
        return self.dictionary.intern(term)

    def lookup(self, term: Term) -> Optional[TermId]:
        return self.dictionary.lookup(term)

    def resolve(self, tid: TermId) -> Term:
        return self.dictionary.resolve(tid)


def intern(store: TripleStore, term: Term) -> TermId:
    return store.intern(term)


def resolve(store: TripleStore, tid: TermId) -> Term:
    return store.resolve(tid)


# --- N-Triples reader -------------------------------------------------------

_IRI = r"<([^<>\"{}|^`\\\s]*)>"
_BNODE = r"_:([A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)"
_LITERAL = r'"((?:[^"\\\n\r]|\\.)*)"(?:@([A-Za-z]+(?:-[A-Za-z0-9]+)*)|\^\^' + _IRI + r")?"

_SUBJECT_RE = re.compile(rf"{_IRI}|{_BNODE}")
_PREDICATE_RE = re.compile(_IRI)
_OBJECT_RE = re.compile(rf"{_IRI}|{_BNODE}|{_LITERAL}")
_WS_RE = re.compile(r"[ \t]*")
_END_RE = re.compile(r"[ \t]*\.[ \t]*(?:#.*)?")
_TAGGED_LEXICAL = re.compile(r'"(.*)"(@[A-Za-z]+(?:-[A-Za-z0-9]+)*|\^\^<[^>]*>)', re.S)

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_ESCAPE_RE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))")


def unescape_string(text: str) -> str:
    def sub(m: re.Match) -> str:
        hex_code = m.group(1) or m.group(2)
        if hex_code:
            return chr(int(hex_code, 16))
        ch = m.group(3)
        if ch not in _ESCAPES:
            raise ValueError(f"invalid escape \\{ch}")
        return _ESCAPES[ch]

    return _ESCAPE_RE.sub(sub, text) if "\\" in text else text


def _escape(text: str) -> str:
    return (text.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\r", "\\r"))


def _parse_term(regex: re.Pattern, line: str, pos: int, lineno: int, what: str) -> tuple[Term, int]:
    pos = _WS_RE.match(line, pos).end()
    m = regex.match(line, pos)
    if m is None:
        raise NTriplesParseError(lineno, f"expected {what} at column {pos + 1}")
    groups = m.groups()
    if regex is _PREDICATE_RE:
        return IRI(groups[0]), m.end()
    if groups[0] is not None:
        return IRI(groups[0]), m.end()
    if groups[1] is not None:
        return BlankNode(groups[1]), m.end()
    try:
        value = unescape_string(groups[2])
    except ValueError as exc:
        raise NTriplesParseError(lineno, str(exc)) from None
    return Literal(value, lang=groups[3], datatype=groups[4]), m.end()


def parse_ntriples_line(line: str, lineno: int = 1) -> Optional[tuple[Term, Term, Term]]:
    """Parse one line; returns None for blank and comment lines."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    s, pos = _parse_term(_SUBJECT_RE, line, 0, lineno, "subject")
    p, pos = _parse_term(_PREDICATE_RE, line, pos, lineno, "predicate")
    o, pos = _parse_term(_OBJECT_RE, line, pos, lineno, "object")
    end = _END_RE.match(line, pos)
    if end is None or end.end() != len(line.rstrip("\r\n")):
        raise NTriplesParseError(lineno, f"expected ' .' at column {pos + 1}")
    return s, p, o


def iter_ntriples(source: Union[bytes, BinaryIO, Iterable[bytes]]) -> Iterator[tuple[Term, Term, Term]]:
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    for lineno, raw in enumerate(source, start=1):
        try:
            line = raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw
        except UnicodeDecodeError as exc:
            raise NTriplesParseError(lineno, f"invalid UTF-8: {exc}") from None
        parsed = parse_ntriples_line(line.rstrip("\r\n"), lineno)
        if parsed is not None:
            yield parsed


def load_ntriples(source: Union[bytes, BinaryIO, Iterable[bytes]]) -> TripleStore:
    """Build a store from an N-Triples byte stream.

    Ids are assigned in order of first occurrence (subject, predicate, object
    within each line). Duplicate triples are dropped.
    """
    d = Dictionary()
    ids = [(d.intern(s), d.intern(p), d.intern(o)) for s, p, o in iter_ntriples(source)]
    return TripleStore(d, ids)


def load_ntriples_file(path: Union[str, os.PathLike]) -> TripleStore:
    with open(path, "rb") as fh:
        return load_ntriples(fh)
