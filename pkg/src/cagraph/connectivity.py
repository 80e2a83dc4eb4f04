"""Disjoint-set union over vertex ids plus a component census.

Union by size with iterative path compression; sizes are maintained at the
roots so the census is a single pass.  One ``DsuState`` per realization, no
cross-thread sharing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import numpy as np


class DsuState:
    """Disjoint-set forest over vertices 0..n-1 with size tracking."""

    __slots__ = ("parent", "size", "component_count")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n >= 1 required")
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)
        self.component_count = n

    @property
    def n(self) -> int:
        return len(self.parent)

    def _check(self, v: int) -> None:
        if not 0 <= v < len(self.parent):
            raise IndexError(f"vertex id {v} out of range [0, {len(self.parent)})")

    def find(self, v: int) -> int:
        """Root of v's component, compressing the path by halving."""
        self._check(v)
        parent = self.parent
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return int(v)

    def union(self, u: int, v: int) -> bool:
        """Merge the components of u and v; True iff they were distinct."""
        ru = self.find(u)
        rv = self.find(v)
        if ru == rv:
            return False
        if self.size[ru] < self.size[rv]:
            ru, rv = rv, ru
        self.parent[rv] = ru
        self.size[ru] += self.size[rv]
        self.component_count -= 1
        return True


@dataclass(frozen=True)
class ComponentCensus:
    """Component summary of one realization.

    ``y0`` counts singleton components, which coincide with degree-zero
    vertices because every inserted edge merges its two endpoints.
    """

    is_connected: bool
    component_count: int
    largest: int
    y0: int
    size_histogram: Dict[int, int]


def census(state: DsuState) -> ComponentCensus:
    """Component census in one pass, compressing every path along the way."""
    n = state.n
    for v in range(n):
        state.find(v)
    hist: Dict[int, int] = {}
    largest = 0
    parent = state.parent
    size = state.size
    for v in range(n):
        if parent[v] == v:
            s = int(size[v])
            hist[s] = hist.get(s, 0) + 1
            if s > largest:
                largest = s
    return ComponentCensus(
        is_connected=state.component_count == 1,
        component_count=state.component_count,
        largest=largest,
        y0=hist.get(1, 0),
        size_histogram=hist,
    )


def census_from_size_counts(counts: np.ndarray, component_count: int) -> ComponentCensus:
    """Build a census from an array where counts[s] = components of size s."""
    sizes = np.nonzero(counts)[0]
    hist = {int(s): int(counts[s]) for s in sizes}
    largest = int(sizes[-1]) if len(sizes) else 0
    return ComponentCensus(
        is_connected=component_count == 1,
        component_count=component_count,
        largest=largest,
        y0=hist.get(1, 0),
        size_histogram=hist,
    )
