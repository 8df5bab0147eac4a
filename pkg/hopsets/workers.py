"""
The thread pool behind per-source and per-center searches.

``HOPSET_THREADS`` caps the pool. Results always come back in input order,
so every merge downstream sees the same sequence whatever the thread count.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from .constants import THREADS_ENV
from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    """Threads allowed by ``$HOPSET_THREADS`` (default 1: run inline)."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return 1
    try:
        count = int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {raw!r}") from e
    if count < 1:
        raise ConfigurationError(f"{THREADS_ENV} must be at least 1, got {count}")
    return count


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """``[fn(x) for x in items]``, fanned out over the pool when it has room."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
