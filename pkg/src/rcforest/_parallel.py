"""Order-preserving parallel map used for the per-vertex steps of a round.

Python threads do not speed up this pure-Python code; the point is that every
round must produce the same result under any schedule, and the tests run the
same builds with 1, 2 and 8 workers to check exactly that.
"""
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

# below this many items the pool overhead dominates
MIN_PARALLEL_ITEMS = 64


@lru_cache(maxsize=None)
def _pool(threads):
    return ThreadPoolExecutor(max_workers=threads, thread_name_prefix="rcforest")


def parallel_map(fn, items, threads=1):
    items = list(items)
    if threads <= 1 or len(items) < MIN_PARALLEL_ITEMS:
        return [fn(x) for x in items]
    size = -(-len(items) // threads)
    chunks = [items[i:i + size] for i in range(0, len(items), size)]
    parts = _pool(threads).map(lambda chunk: [fn(x) for x in chunk], chunks)
    return [y for part in parts for y in part]
