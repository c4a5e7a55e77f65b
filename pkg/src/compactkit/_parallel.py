import os
from concurrent.futures import ThreadPoolExecutor


def max_threads() -> int:
    """Thread cap from ``COMPACTKIT_THREADS`` (default 1, i.e. serial)."""
    try:
        return max(1, int(os.environ.get("COMPACTKIT_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn, items):
    """Order-preserving map; threads only when the cap allows more than one."""
    items = list(items)
    n = min(max_threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
