"""Deterministic work pool for independent slice jobs.

Jobs are pure functions of immutable inputs, so the only determinism
requirement is that results are merged by position, never by completion
order.  ThreadPoolExecutor.map preserves input order, and the heavy kernels
run inside numpy which releases the GIL.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("KOSZULKIT_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"KOSZULKIT_THREADS={raw!r} is not an integer")
        return max(1, n)
    return os.cpu_count() or 1


def pmap(fn, items):
    """Order-preserving parallel map; falls back to a plain loop for one worker."""
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
