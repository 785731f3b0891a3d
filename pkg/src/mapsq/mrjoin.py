"""MapReduce-style join of two binding tables.

The join runs in three phases:

* map: every row of both operands is split into a keyed entry whose key is
  the row's shared-variable columns and whose value is the remaining columns,
  tagged with a LEFT or RIGHT flag by origin;
* sort: entries are ordered by ``(key, flag, value)``;
* reduce-duplicate: within each key group, every LEFT entry is paired with
  every RIGHT entry. Because LEFT sorts before RIGHT, each group is one
  LEFT run followed by one RIGHT run and a group holding a single flag
  produces nothing.

Each phase is split across ``workers`` threads. Output is a pure function of
the inputs: identical row sequences for every worker count.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

import numpy as np

from mapsq.backend import check_workers, chunk_bounds, parallel_map, weighted_bounds
from mapsq.errors import ContractError
from mapsq.table import BindingTable

# below this many entries a parallel sort costs more than it saves
_PARALLEL_SORT_MIN = 4096
_PAD = -1


class Flag(enum.IntEnum):
    LEFT = 0
    RIGHT = 1


class KeyedEntry(NamedTuple):
    key: tuple[int, ...]
    value: tuple[int, ...]
    flag: Flag


@dataclass(frozen=True)
class JoinSpec:
    left_schema: tuple[str, ...]
    right_schema: tuple[str, ...]
    shared: tuple[str, ...]

    @classmethod
    def of(cls, left_schema: Sequence[str], right_schema: Sequence[str]) -> "JoinSpec":
        shared = tuple(sorted(set(left_schema) & set(right_schema)))
        return cls(tuple(left_schema), tuple(right_schema), shared)

    @property
    def left_rest(self) -> tuple[str, ...]:
        return tuple(v for v in self.left_schema if v not in self.shared)

    @property
    def right_rest(self) -> tuple[str, ...]:
        return tuple(v for v in self.right_schema if v not in self.shared)

    @property
    def output_schema(self) -> tuple[str, ...]:
        return self.shared + self.left_rest + self.right_rest

    def columns(self, flag: Flag) -> tuple[list[int], list[int]]:
        """(key column indexes, value column indexes) of one operand."""
        schema, rest = ((self.left_schema, self.left_rest) if flag is Flag.LEFT
                        else (self.right_schema, self.right_rest))
        return [schema.index(v) for v in self.shared], [schema.index(v) for v in rest]


class EntryBatch:
    """A sequence of keyed entries stored column-wise.

    ``values`` is padded to the wider of the two operands' value widths; the
    padding is constant per flag so it never affects ordering.
    """

    __slots__ = ("keys", "flags", "values", "left_width", "right_width")

    def __init__(self, keys: np.ndarray, flags: np.ndarray, values: np.ndarray,
                 left_width: int, right_width: int):
        self.keys = keys
        self.flags = flags
        self.values = values
        self.left_width = left_width
        self.right_width = right_width

    @classmethod
    def empty(cls, key_width: int, left_width: int, right_width: int) -> "EntryBatch":
        return cls(np.empty((0, key_width), np.int64), np.empty(0, np.int8),
                   np.empty((0, max(left_width, right_width)), np.int64), left_width, right_width)

    @classmethod
    def from_entries(cls, entries: Iterable[KeyedEntry], key_width: int,
                     left_width: int, right_width: int) -> "EntryBatch":
        entries = list(entries)
        width = max(left_width, right_width)
        keys = np.array([e.key for e in entries], np.int64).reshape(len(entries), key_width)
        flags = np.array([int(e.flag) for e in entries], np.int8)
        values = np.full((len(entries), width), _PAD, np.int64)
        for i, e in enumerate(entries):
            expected = left_width if e.flag is Flag.LEFT else right_width
            if len(e.value) != expected:
                raise ValueError(f"entry {i} has value width {len(e.value)}, expected {expected}")
            values[i, :expected] = e.value
        return cls(keys, flags, values, left_width, right_width)

    @classmethod
    def concat(cls, batches: Sequence["EntryBatch"]) -> "EntryBatch":
        first = batches[0]
        return cls(np.concatenate([b.keys for b in batches]),
                   np.concatenate([b.flags for b in batches]),
                   np.concatenate([b.values for b in batches]),
                   first.left_width, first.right_width)

    def take(self, idx: np.ndarray) -> "EntryBatch":
        return EntryBatch(self.keys[idx], self.flags[idx], self.values[idx],
                          self.left_width, self.right_width)

    def __len__(self) -> int:
        return len(self.flags)

    def __getitem__(self, i: int) -> KeyedEntry:
        flag = Flag(int(self.flags[i]))
        width = self.left_width if flag is Flag.LEFT else self.right_width
        return KeyedEntry(tuple(self.keys[i].tolist()), tuple(self.values[i, :width].tolist()), flag)

    def __iter__(self) -> Iterator[KeyedEntry]:
        for i in range(len(self)):
            yield self[i]

    def sort_keys(self) -> list[np.ndarray]:
        """Columns for ``np.lexsort`` giving (key, flag, value) order."""
        cols = [self.values[:, j] for j in reversed(range(self.values.shape[1]))]
        cols.append(self.flags)
        cols.extend(self.keys[:, j] for j in reversed(range(self.keys.shape[1])))
        return cols


def _as_batch(entries: Union[EntryBatch, Sequence[KeyedEntry]]) -> EntryBatch:
    if isinstance(entries, EntryBatch):
        return entries
    entries = list(entries)
    if not entries:
        return EntryBatch.empty(0, 0, 0)
    widths = {Flag.LEFT: 0, Flag.RIGHT: 0}
    for e in entries:
        widths[e.flag] = len(e.value)
    return EntryBatch.from_entries(entries, len(entries[0].key), widths[Flag.LEFT], widths[Flag.RIGHT])


def map_phase(tp1: BindingTable, tp2: BindingTable, spec: JoinSpec, workers: int = 1) -> EntryBatch:
    """Emit one flagged entry per input row, LEFT rows first."""
    workers = check_workers(workers)
    if tp1.schema != spec.left_schema or tp2.schema != spec.right_schema:
        raise ContractError("join spec does not match operand schemas")
    lw, rw = len(spec.left_rest), len(spec.right_rest)
    width = max(lw, rw)
    tasks = []
    for table, flag in ((tp1, Flag.LEFT), (tp2, Flag.RIGHT)):
        key_cols, val_cols = spec.columns(flag)
        for lo, hi in chunk_bounds(len(table), workers):
            tasks.append((table.data, lo, hi, flag, key_cols, val_cols))

    def emit(task) -> EntryBatch:
        data, lo, hi, flag, key_cols, val_cols = task
        chunk = data[lo:hi]
        values = np.full((hi - lo, width), _PAD, np.int64)
        values[:, :len(val_cols)] = chunk[:, val_cols]
        return EntryBatch(chunk[:, key_cols], np.full(hi - lo, int(flag), np.int8), values, lw, rw)

    return EntryBatch.concat(parallel_map(emit, tasks, workers))


def sort_phase(entries: Union[EntryBatch, Sequence[KeyedEntry]], workers: int = 1) -> EntryBatch:
    """Stable sort by (key, flag, value).

    With several workers this is a sample sort: the leading key column is cut
    into value ranges at sampled splitters, each range is sorted on its own
    thread, and the ranges are concatenated in order.
    """
    workers = check_workers(workers)
    batch = _as_batch(entries)
    n = len(batch)
    if workers == 1 or n < _PARALLEL_SORT_MIN or batch.keys.shape[1] == 0:
        return batch.take(np.lexsort(batch.sort_keys()))

    lead = batch.keys[:, 0]
    sample = np.sort(lead[:: max(1, n // (workers * 64))])
    splitters = np.unique(sample[(np.arange(1, workers) * len(sample)) // workers])
    bucket = np.searchsorted(splitters, lead, side="right")
    by_bucket = np.argsort(bucket, kind="stable")
    edges = np.concatenate(([0], np.cumsum(np.bincount(bucket, minlength=len(splitters) + 1))))

    def sort_bucket(bounds: tuple[int, int]) -> np.ndarray:
        idx = by_bucket[bounds[0]:bounds[1]]
        return idx[np.lexsort(batch.take(idx).sort_keys())]

    pieces = parallel_map(sort_bucket, list(zip(edges[:-1], edges[1:])), workers)
    return batch.take(np.concatenate(pieces))


def reduce_duplicate_phase(entries: Union[EntryBatch, Sequence[KeyedEntry]], spec: JoinSpec,
                           workers: int = 1) -> BindingTable:
    """Cartesian product of the LEFT and RIGHT runs inside every key group."""
    workers = check_workers(workers)
    batch = _as_batch(entries)
    schema = spec.output_schema
    n = len(batch)
    if n == 0:
        return BindingTable(schema)
    keys, flags, values = batch.keys, batch.flags, batch.values
    lw, rw = len(spec.left_rest), len(spec.right_rest)

    changed = np.any(keys[1:] != keys[:-1], axis=1) if keys.shape[1] else np.zeros(n - 1, bool)
    starts = np.concatenate(([0], np.flatnonzero(changed) + 1))
    ends = np.concatenate((starts[1:], [n]))
    # flags are sorted inside a group, so the LEFT run ends where RIGHT begins
    left_before = np.concatenate(([0], np.cumsum(flags == Flag.LEFT)))
    splits = starts + (left_before[ends] - left_before[starts])
    n_right = ends - splits
    pairs = (splits - starts) * n_right

    # Runs of identical LEFT entries. Each run is paired with the RIGHT entries
    # right-major, so repeated left rows still come out in (key, left, right) order.
    differs = changed | (flags[1:] != flags[:-1]) | np.any(values[1:] != values[:-1], axis=1)
    run_start = np.concatenate(([0], np.flatnonzero(differs) + 1))
    run_start = run_start[flags[run_start] == Flag.LEFT]
    run_end = np.minimum(np.concatenate((run_start[1:], [n])),
                         splits[np.searchsorted(starts, run_start, side="right") - 1])
    run_group = np.searchsorted(starts, run_start, side="right") - 1
    first_run = np.searchsorted(run_start, starts)

    def product(bounds: tuple[int, int]) -> np.ndarray:
        ga, gb = bounds
        ra = first_run[ga]
        rb = first_run[gb] if gb < len(starts) else len(run_start)
        size = run_end[ra:rb] - run_start[ra:rb]
        group = run_group[ra:rb]
        counts = size * n_right[group]
        total = int(counts.sum())
        if total == 0:
            return np.empty((0, len(schema)), np.int64)
        run = np.repeat(np.arange(ra, rb), counts)
        j = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        m = (run_end - run_start)[run]
        li = run_start[run] + j % m
        ri = splits[run_group[run]] + j // m
        return np.hstack((keys[li], values[li, :lw], values[ri, :rw]))

    pieces = parallel_map(product, weighted_bounds(pairs, workers), workers)
    return BindingTable(schema, np.concatenate(pieces) if pieces else None)


def mr_join(tp1: BindingTable, tp2: BindingTable, workers: int = 1) -> BindingTable:
    """Natural join on all shared variables.

    Output schema is the sorted shared variables, then the left operand's
    other variables, then the right's. Rows are ordered by key, left value,
    right value; one row per matching (left, right) pair.
    """
    workers = check_workers(workers)
    spec = JoinSpec.of(tp1.schema, tp2.schema)
    if not spec.shared:
        raise ContractError(f"no shared variable between {tp1.schema} and {tp2.schema}; use cross_product")
    entries = map_phase(tp1, tp2, spec, workers)
    entries = sort_phase(entries, workers)
    return reduce_duplicate_phase(entries, spec, workers)
