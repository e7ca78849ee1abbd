"""Seeded, chunked Monte Carlo with order-independent merging.

A run of ``n`` samples is cut into fixed-size chunks.  Chunk ``i`` draws from
its own generator spawned from ``SeedSequence(seed)``, so results depend only
on ``(seed, n)`` and never on how many worker threads evaluated the chunks.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import SymquantError

CHUNK = 1 << 16


@dataclass(frozen=True)
class Moments:
    """Sample count, mean and sum of squared deviations (scalar or per-column)."""

    n: int
    mean: np.ndarray | float
    m2: np.ndarray | float

    @property
    def var(self):
        return self.m2 / (self.n - 1) if self.n > 1 else self.m2 * 0.0

    @property
    def std(self):
        return np.sqrt(self.var)

    @property
    def std_error(self):
        return self.std / np.sqrt(self.n)


def check_seed(seed) -> int:
    if seed is None:
        raise SymquantError("a seed is required")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise SymquantError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def generators(seed, count):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(check_seed(seed)).spawn(count)]


def merge(parts) -> Moments:
    """Combine per-chunk ``(n, mean, m2)`` triples (Chan et al. pairwise update)."""
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        if n == 0:
            n, mean, m2 = nb, np.asarray(mb, dtype=float), np.asarray(m2b, dtype=float)
            continue
        tot = n + nb
        delta = mb - mean
        mean = mean + delta * (nb / tot)
        m2 = m2 + m2b + delta * delta * (n * nb / tot)
        n = tot
    if np.ndim(mean) == 0:
        mean, m2 = float(mean), float(m2)
    return Moments(n, mean, m2)


def run_chunks(
    fn: Callable[[np.random.Generator, int], tuple],
    seed,
    n: int,
    threads: int = 1,
    chunk: int = CHUNK,
) -> Moments:
    """Evaluate ``fn(rng, size) -> (mean, m2)`` over chunks and merge in order."""
    if n < 1:
        raise SymquantError(f"sample count must be >= 1, got {n}")
    sizes = [chunk] * (n // chunk)
    if n % chunk:
        sizes.append(n % chunk)
    rngs = generators(seed, len(sizes))

    def task(i):
        mean, m2 = fn(rngs[i], sizes[i])
        return sizes[i], mean, m2

    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(task, range(len(sizes))))
    else:
        parts = [task(i) for i in range(len(sizes))]
    return merge(parts)
