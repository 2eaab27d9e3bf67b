from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """map() over a thread pool; results always come back in input order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    logger.debug("mapping %d items on %d threads", len(items), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def first_match(
    predicate: Callable[[T], bool], items: Iterable[T], threads: int = 1, chunk: int = 64
) -> Optional[T]:
    """First item, in input order, that satisfies predicate."""
    if threads <= 1:
        for x in items:
            if predicate(x):
                return x
        return None

    batch: List[T] = []
    for x in items:
        batch.append(x)
        if len(batch) >= chunk:
            hit = _first_in_batch(predicate, batch, threads)
            if hit is not None:
                return hit
            batch = []
    return _first_in_batch(predicate, batch, threads) if batch else None


def _first_in_batch(predicate: Callable[[T], bool], batch: List[T], threads: int) -> Optional[T]:
    for x, ok in zip(batch, ordered_map(predicate, batch, threads)):
        if ok:
            return x
    return None
