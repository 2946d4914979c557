"""Deterministic chunked execution.

Work is split into fixed-size chunks whose boundaries depend only on the
range and chunk size, never on the worker count; partial results are
combined in chunk order.  With nogil kernels the thread pool gives real
parallelism, and results are bit-identical for any `jobs`.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

DEFAULT_CHUNK = 1 << 18


def iter_chunks(lo: int, hi: int, chunk: int = DEFAULT_CHUNK):
    """Yield (a, b) with lo <= a < b <= hi covering [lo, hi) in order."""
    a = lo
    while a < hi:
        b = min(a + chunk, hi)
        yield a, b
        a = b


def chunked_map(fn, lo: int, hi: int, jobs: int = 1, chunk: int = DEFAULT_CHUNK):
    """Run fn(a, b) over fixed chunks of [lo, hi); return results in order."""
    spans = list(iter_chunks(lo, hi, chunk))
    if jobs <= 1 or len(spans) <= 1:
        return [fn(a, b) for a, b in spans]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, a, b) for a, b in spans]
        return [f.result() for f in futures]
