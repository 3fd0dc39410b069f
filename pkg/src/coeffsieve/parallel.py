"""Order-preserving process-pool map.

Results come back in input order and every reduction downstream is over
exact integers or in a fixed order, so output does not depend on the worker
count.
"""

from __future__ import annotations

import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def pmap(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    ctx = mp.get_context("fork")
    with ProcessPoolExecutor(max_workers=min(workers, len(items)), mp_context=ctx) as ex:
        return list(ex.map(fn, items))


def shard_ranges(total: int, shards: int) -> list[range]:
    """Split ``range(total)`` into ``shards`` contiguous pieces (some may be empty)."""
    shards = max(1, shards)
    step, extra = divmod(total, shards)
    out, start = [], 0
    for s in range(shards):
        stop = start + step + (1 if s < extra else 0)
        out.append(range(start, stop))
        start = stop
    return out
