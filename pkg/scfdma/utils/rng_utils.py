"""Seeded random substreams and an ordered parallel map."""
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import numpy as np
from tqdm import tqdm  # type: ignore

from scfdma.utils.errors import ConfigError

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV = "SCFDMA_WORKERS"


def substream(seed: int, index: int, attempt: int = 0) -> np.random.Generator:
    """Independent generator for one (realization, attempt) pair.

    The stream depends only on its key, never on how many other streams
    were drawn or in which order.
    """
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(index, attempt))
    )


def default_workers() -> int:
    """Worker count from the environment, 1 when unset."""
    value = os.environ.get(WORKERS_ENV, "1")
    try:
        workers = int(value)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {value!r}")
    if workers < 1:
        raise ConfigError(f"{WORKERS_ENV} must be positive, got {workers}")
    return workers


def ordered_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    workers: int = 1,
    desc: Optional[str] = None,
    progress: bool = True,
    total: Optional[int] = None,
) -> List[R]:
    """Apply ``fn`` to every item and return the results in input order.

    Args:
        fn: Function of one item.
        items: Inputs.
        workers: Threads to use; 1 runs inline.
        desc: Progress bar label.
        progress: Show a tqdm bar.
        total: Number of items, for the bar.

    Returns:
        List of results, ordered as ``items``.
    """
    if workers < 1:
        raise ConfigError(f"workers must be positive, got {workers}")
    if workers == 1:
        bar = tqdm(items, desc=desc, total=total, disable=not progress)
        return [fn(item) for item in bar]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(
            tqdm(executor.map(fn, items), desc=desc, total=total, disable=not progress)
        )
