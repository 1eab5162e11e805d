import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "SET_THERMO_THREADS"


def max_threads():
    """Worker cap from ``SET_THERMO_THREADS`` (default: CPU count)."""
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def ordered_map(fn, items):
    """Map ``fn`` over ``items`` with a thread pool; results keep input order."""
    items = list(items)
    workers = min(max_threads(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
