"""Deterministic per-item parallelism capped by MIDAS_THREADS.

Results always come back in input order, so callers produce identical output
whatever the thread count (0 or unset = auto). Worker functions must be pure.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    raw = os.environ.get("MIDAS_THREADS", "0")
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 0:
        value = 0
    if value == 0:
        value = os.cpu_count() or 1
    return value


def ordered_map(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    workers = thread_count()
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
