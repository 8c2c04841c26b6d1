"""Core domain types and the exact group h-index computation.

A Unit owns a multiset of publications, each carrying only a citation
count; a Dataset is an ordered collection of units.  All types are
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable

import numpy as np

# Representational cap for citation counts.  Real counts never approach
# this; anything larger is rejected at construction/ingestion time.
MAX_CITATIONS = 2**64 - 1


@dataclass(frozen=True)
class Publication:
    """One research output, reduced to its citation count."""

    citations: int

    def __post_init__(self) -> None:
        if not isinstance(self.citations, int) or isinstance(self.citations, bool):
            raise TypeError(f"citations must be an int, got {type(self.citations).__name__}")
        if self.citations < 0:
            raise ValueError(f"citations must be >= 0, got {self.citations}")
        if self.citations > MAX_CITATIONS:
            raise ValueError(f"citations {self.citations} exceeds the 64-bit unsigned range")


@dataclass(frozen=True)
class Unit:
    """A research group/institution owning a multiset of publications.

    Zero publications is legal; such a unit scores h = 0.
    """

    id: str
    name: str
    publications: tuple[Publication, ...]

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("unit id must be non-empty")
        object.__setattr__(self, "publications", tuple(self.publications))

    @property
    def productivity(self) -> int:
        """Number of publications attributed to this unit (its size proxy)."""
        return len(self.publications)

    def citation_counts(self) -> np.ndarray:
        """Citation counts as a uint64 array, in publication order."""
        return np.fromiter(
            (p.citations for p in self.publications), dtype=np.uint64, count=len(self.publications)
        )


@dataclass(frozen=True)
class Dataset:
    """A named, ordered collection of units with distinct ids."""

    name: str
    units: tuple[Unit, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "units", tuple(self.units))
        if not self.units:
            raise ValueError("a dataset needs at least one unit")
        seen: set[str] = set()
        for unit in self.units:
            if unit.id in seen:
                raise ValueError(f"duplicate unit id {unit.id!r}")
            seen.add(unit.id)

    @property
    def pool_size(self) -> int:
        """Total number of publications across all units (duplicates kept)."""
        return sum(u.productivity for u in self.units)


def _as_citation_array(citations: Iterable[int] | np.ndarray) -> np.ndarray:
    """Coerce to an unsigned integer array, rejecting negatives."""
    if isinstance(citations, np.ndarray):
        arr = citations
        if arr.size == 0:
            return arr.reshape(0).astype(np.uint64)
        if arr.dtype.kind == "u":
            return arr
        if arr.dtype.kind == "i":
            if arr.min() < 0:
                raise ValueError("citation counts must be nonnegative")
            return arr
        raise ValueError(f"citation counts must be an integer array, got dtype {arr.dtype}")
    # Convert element by element before numpy sees the values: asarray would
    # silently round Python ints near 2^64 through float64.
    values = list(citations)
    if not values:
        return np.empty(0, dtype=np.uint64)
    try:
        return np.array([operator.index(c) for c in values], dtype=np.uint64)
    except (OverflowError, TypeError, ValueError) as exc:
        raise ValueError(f"citation counts must be integers in [0, 2^64): {exc}") from None


def h_index(citations: Iterable[int] | np.ndarray) -> int:
    """Largest h such that at least h of the counts are >= h.

    Single counting pass over buckets capped at n = len(citations), so the
    cost is linear in the input size regardless of how large individual
    counts are.  Equivalent to the classic sort-based definition.
    """
    arr = _as_citation_array(citations)
    n = int(arr.size)
    if n == 0:
        return 0
    capped = np.minimum(arr, n).astype(np.int64)
    counts = np.bincount(capped, minlength=n + 1)
    # at_least[h] = number of papers with at least h citations, for h <= n
    at_least = np.cumsum(counts[::-1])[::-1]
    qualifying = np.nonzero(at_least >= np.arange(n + 1))[0]
    return int(qualifying[-1])


def group_h_index(unit: Unit) -> int:
    """h-index of the unit's pooled citation counts."""
    return h_index(unit.citation_counts())


def productivity(unit: Unit) -> int:
    """Cardinality of the unit's publication multiset."""
    return unit.productivity
