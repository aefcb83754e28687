from __future__ import annotations

import logging
import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from .errors import ConfigError

logger = logging.getLogger(__name__)

THREADS_ENV = "RADAR_MI_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    """Worker cap from RADAR_MI_THREADS; unset or 0 means one worker per CPU."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from e
    if value < 0:
        raise ConfigError(f"{THREADS_ENV} must be >= 0, got {value}")
    return value or (os.cpu_count() or 1)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """Apply fn to every item; results come back in input order whatever the pool size."""
    items = list(items)
    if workers is None:
        workers = thread_count()
    workers = min(workers, len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    logger.debug(f"Evaluating {len(items)} points on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
