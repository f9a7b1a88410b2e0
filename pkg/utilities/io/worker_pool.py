"""
Worker pool utilities for the detection toolkit.

Per-image work (preprocessing, detection, matching) fans out over a thread
pool. Results always come back in submission order so that everything written
afterwards is independent of scheduling.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import psutil

logger = logging.getLogger(__name__)


def default_worker_count():
    """Return the number of physical cores, or 1 if it cannot be determined."""
    count = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    return max(1, int(count))


def map_in_order(func, items, workers=None):
    """
    Apply ``func`` to every item, possibly in parallel, keeping input order.

    Parameters:
        func (callable): Function of one argument.
        items (iterable): Inputs.
        workers (int, optional): Pool size. ``None`` uses
            :func:`default_worker_count`; ``1`` runs inline without threads.

    Returns:
        list: ``[func(item) for item in items]``

    Raises:
        Exception: The first failure in input order is re-raised once all
        submitted work has finished.
    """
    items = list(items)
    if workers is None:
        workers = default_worker_count()
    workers = max(1, min(int(workers), len(items) or 1))

    if workers == 1:
        return [func(item) for item in items]

    logger.debug(f"Running {len(items)} tasks on {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(func, item) for item in items]
        # Collect every outcome before raising so no task is left running.
        outcomes = []
        for future in futures:
            try:
                outcomes.append((True, future.result()))
            except Exception as exc:
                outcomes.append((False, exc))

    for ok, value in outcomes:
        if not ok:
            raise value
    return [value for _, value in outcomes]
