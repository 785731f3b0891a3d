from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence

import numpy as np


class BindingTable:
    """Fixed-width table of variable bindings, one int64 column per variable.

    Rows are held as a 2-D numpy array of term ids with shape
    ``(len(rows), len(schema))``.
    """

    __slots__ = ("schema", "data")

    def __init__(self, schema: Sequence[str], data=None):
        self.schema = tuple(schema)
        if len(set(self.schema)) != len(self.schema):
            raise ValueError(f"duplicate variable in schema {self.schema}")
        if data is None:
            data = np.empty((0, len(self.schema)), dtype=np.int64)
        elif not isinstance(data, np.ndarray):
            data = list(data)
            data = np.array(data, dtype=np.int64).reshape(len(data), len(self.schema))
        if data.ndim != 2 or data.shape[1] != len(self.schema):
            raise ValueError(f"row width {data.shape[1:]} does not match schema {self.schema}")
        self.data = data.astype(np.int64, copy=False)

    @classmethod
    def from_rows(cls, schema: Sequence[str], rows: Iterable[Sequence[int]]) -> "BindingTable":
        return cls(schema, [tuple(r) for r in rows])

    def __len__(self) -> int:
        return self.data.shape[0]

    def __repr__(self) -> str:
        return f"BindingTable(schema={self.schema}, rows={len(self)})"

    def __eq__(self, other) -> bool:
        """Equal schema and identical row sequence."""
        if not isinstance(other, BindingTable):
            return NotImplemented
        return self.schema == other.schema and np.array_equal(self.data, other.data)

    @property
    def rows(self) -> list[tuple[int, ...]]:
        return [tuple(r) for r in self.data.tolist()]

    def column(self, var: str) -> np.ndarray:
        return self.data[:, self.schema.index(var)]

    def project(self, variables: Sequence[str]) -> "BindingTable":
        idx = [self.schema.index(v) for v in variables]
        return BindingTable(variables, self.data[:, idx])

    def multiset(self, variables: Sequence[str] | None = None) -> Counter:
        """Rows as a multiset, optionally after reordering columns."""
        t = self if variables is None else self.project(variables)
        return Counter(t.rows)


class ResultSet:
    """Decoded query answer: projected variables and rows of terms (a bag)."""

    def __init__(self, schema: Sequence[str], rows: Iterable[tuple] = ()):
        self.schema = tuple(schema)
        self.rows = [tuple(r) for r in rows]
        for r in self.rows:
            if len(r) != len(self.schema):
                raise ValueError(f"row {r} does not match schema {self.schema}")

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __repr__(self) -> str:
        return f"ResultSet(schema={self.schema}, rows={len(self.rows)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResultSet):
            return NotImplemented
        return self.schema == other.schema and self.rows == other.rows

    def multiset(self) -> Counter:
        return Counter(self.rows)
