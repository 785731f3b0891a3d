"""Deterministic data-parallel execution over contiguous chunks.

Work is split into ordered chunks, run on a thread pool (numpy releases the
GIL inside sorts and gathers), and results are always reassembled in chunk
order, so the output never depends on scheduling or on the worker count.
"""

from __future__ import annotations

import functools
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV = "MAPSQ_WORKERS"


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV)
    if value:
        return check_workers(int(value))
    return 1


def check_workers(workers: int) -> int:
    if not isinstance(workers, (int, np.integer)) or workers < 1:
        raise ValueError(f"worker count must be a positive integer, got {workers!r}")
    return int(workers)


@functools.lru_cache(maxsize=None)
def _pool(workers: int) -> ThreadPoolExecutor:
    return ThreadPoolExecutor(max_workers=workers, thread_name_prefix=f"mapsq-{workers}")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: int) -> list[R]:
    """``[fn(x) for x in items]``, evaluated on up to ``workers`` threads."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    return list(_pool(workers).map(fn, items))


def chunk_bounds(n: int, parts: int) -> list[tuple[int, int]]:
    """Split ``range(n)`` into at most ``parts`` contiguous, near-equal pieces."""
    parts = max(1, min(parts, n))
    edges = np.linspace(0, n, parts + 1).astype(np.int64)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a or n == 0]


def weighted_bounds(weights: np.ndarray, parts: int) -> list[tuple[int, int]]:
    """Split item indices into contiguous runs of roughly equal total weight."""
    n = len(weights)
    if n == 0:
        return []
    parts = max(1, min(parts, n))
    cum = np.cumsum(weights, dtype=np.float64)
    targets = cum[-1] * np.arange(1, parts) / parts
    cuts = np.searchsorted(cum, targets, side="right")
    edges = np.unique(np.concatenate(([0], cuts, [n])))
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]
