"""Citation-reshuffling null model.

All publications are pooled, randomly redistributed among the units while
keeping each unit's publication count fixed, and every unit's group
h-index is recomputed.  Repeating this yields the distribution of
h-indices a unit would get on size alone, which is what real rankings are
benchmarked against.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import Dataset, Publication, Unit, h_index

_MAX_SEED = 2**64 - 1
_DEFAULT_WORKER_CAP = 8


@dataclass(frozen=True)
class ReshuffleConfig:
    """Replicate count and master seed for one null-model run."""

    master_seed: int
    replicates: int = 200

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed <= _MAX_SEED:
            raise ValueError("master_seed must fit in 64 unsigned bits")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")


@dataclass(frozen=True)
class ReshuffleResult:
    """Per-unit h-index samples across replicates of the null model.

    `h_samples` has shape (replicates, units); row r holds the h-indices
    of one complete redistribution of the conserved pool.
    """

    unit_ids: tuple[str, ...]
    h_samples: np.ndarray
    real_h: np.ndarray
    productivities: np.ndarray

    def __post_init__(self) -> None:
        m = len(self.unit_ids)
        if self.h_samples.ndim != 2 or self.h_samples.shape[1] != m:
            raise ValueError("h_samples must be a (replicates, units) matrix")
        if self.real_h.shape != (m,) or self.productivities.shape != (m,):
            raise ValueError("per-unit vectors must match unit_ids")
        for arr in (self.h_samples, self.real_h, self.productivities):
            arr.setflags(write=False)

    @property
    def replicates(self) -> int:
        return int(self.h_samples.shape[0])


def replicate_stream(master_seed: int, index: int) -> np.random.Generator:
    """Independent RNG stream for one replicate.

    Counter-keyed on (master_seed, index), so any number of workers in any
    scheduling order reproduce the exact same streams.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=master_seed, spawn_key=(index,)))


def pool(dataset: Dataset) -> np.ndarray:
    """All citation counts of the dataset in one array, duplicates kept."""
    parts = [u.citation_counts() for u in dataset.units]
    if not parts:
        return np.empty(0, dtype=np.uint64)
    return np.concatenate(parts)


def _block_offsets(productivities: np.ndarray) -> np.ndarray:
    return np.cumsum(productivities)[:-1] if productivities.size > 1 else np.empty(0, dtype=np.int64)


def reshuffle_blocks(
    pool_counts: np.ndarray, productivities: Sequence[int] | np.ndarray, rng: np.random.Generator
) -> list[np.ndarray]:
    """One redistribution: permute the pool, cut it into per-unit blocks.

    The blocks partition a full permutation of the pool, so the multiset
    union of the returned blocks always equals the input pool.
    """
    prods = np.asarray(productivities, dtype=np.int64)
    if prods.size and prods.min() < 0:
        raise ValueError("productivities must be nonnegative")
    if int(prods.sum()) != int(pool_counts.size):
        raise ValueError(
            f"productivities sum to {int(prods.sum())} but the pool holds {pool_counts.size} publications"
        )
    permuted = rng.permutation(pool_counts)
    return np.split(permuted, _block_offsets(prods))


def reshuffle_once(
    pool_counts: np.ndarray, productivities: Sequence[int] | np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Per-unit h-indices of one random redistribution of the pool."""
    blocks = reshuffle_blocks(pool_counts, productivities, rng)
    return np.array([h_index(block) for block in blocks], dtype=np.int64)


def reshuffled_dataset(dataset: Dataset, rng: np.random.Generator) -> Dataset:
    """A concrete dataset drawn from the null model (one redistribution)."""
    prods = np.array([u.productivity for u in dataset.units], dtype=np.int64)
    blocks = reshuffle_blocks(pool(dataset), prods, rng)
    units = tuple(
        Unit(id=u.id, name=u.name, publications=tuple(Publication(int(c)) for c in block))
        for u, block in zip(dataset.units, blocks)
    )
    return Dataset(name=f"{dataset.name}-reshuffled", units=units)


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        return max(1, min(_DEFAULT_WORKER_CAP, os.cpu_count() or 1))
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return workers


def run_null_model(
    dataset: Dataset, config: ReshuffleConfig, workers: int | None = None
) -> ReshuffleResult:
    """Run the full reshuffling experiment.

    Replicate r uses the RNG stream keyed by (master_seed, r) and writes
    exactly one row of the sample matrix, so the result is identical for
    any worker count or scheduling order.
    """
    workers = resolve_workers(workers)
    pool_counts = pool(dataset)
    prods = np.array([u.productivity for u in dataset.units], dtype=np.int64)
    real_h = np.array([h_index(u.citation_counts()) for u in dataset.units], dtype=np.int64)
    samples = np.empty((config.replicates, len(dataset.units)), dtype=np.int64)

    def one(replicate: int) -> None:
        rng = replicate_stream(config.master_seed, replicate)
        samples[replicate, :] = reshuffle_once(pool_counts, prods, rng)

    if workers == 1:
        for r in range(config.replicates):
            one(r)
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(one, range(config.replicates)))

    return ReshuffleResult(
        unit_ids=tuple(u.id for u in dataset.units),
        h_samples=samples,
        real_h=real_h,
        productivities=prods,
    )


def average_ranks(values: Iterable[float] | np.ndarray) -> np.ndarray:
    """Ranks 1..n with tied values receiving the mean of their rank span."""
    arr = np.asarray(values, dtype=float)
    order = np.argsort(arr, kind="stable")
    sorted_vals = arr[order]
    ranks = np.empty(arr.size, dtype=float)
    i = 0
    while i < arr.size:
        j = i
        while j + 1 < arr.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x: Iterable[float] | np.ndarray, y: Iterable[float] | np.ndarray) -> float:
    """Rank correlation: Pearson correlation of average ranks."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.ndim != 1 or ya.ndim != 1 or xa.size != ya.size:
        raise ValueError("inputs must be 1-d and of equal length")
    if xa.size < 2:
        raise ValueError("need at least 2 observations")
    if np.all(xa == xa[0]) or np.all(ya == ya[0]):
        raise ValueError("rank correlation is undefined for a constant input")
    rx = average_ranks(xa) - (xa.size + 1) / 2.0
    ry = average_ranks(ya) - (ya.size + 1) / 2.0
    rho = float(np.dot(rx, ry) / math.sqrt(np.dot(rx, rx) * np.dot(ry, ry)))
    return max(-1.0, min(1.0, rho))


def mean_spearman_vs_real(result: ReshuffleResult) -> float:
    """Mean over replicates of the rank correlation with the real h vector."""
    coeffs = [spearman(result.real_h, row) for row in result.h_samples]
    return float(np.mean(coeffs))


def spearman_vs_mean_null(result: ReshuffleResult) -> float:
    """Diagnostic variant: correlate the real h vector against the per-unit
    mean reshuffled h instead of averaging per-replicate coefficients."""
    return spearman(result.real_h, result.h_samples.mean(axis=0))
