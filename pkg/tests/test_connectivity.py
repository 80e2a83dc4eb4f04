import random
from collections import deque

import pytest

from cagraph import ComponentCensus, DsuState, census
from cagraph.connectivity import census_from_size_counts

import numpy as np


def bfs_census(n, edges):
    """Reference component labeling by breadth-first search."""
    adjacency = [[] for _ in range(n)]
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    seen = [False] * n
    hist = {}
    largest = 0
    components = 0
    for start in range(n):
        if seen[start]:
            continue
        components += 1
        size = 0
        queue = deque([start])
        seen[start] = True
        while queue:
            v = queue.popleft()
            size += 1
            for w in adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        hist[size] = hist.get(size, 0) + 1
        largest = max(largest, size)
    return ComponentCensus(
        is_connected=components == 1,
        component_count=components,
        largest=largest,
        y0=hist.get(1, 0),
        size_histogram=hist,
    )


def test_union_basics():
    dsu = DsuState(3)
    assert dsu.union(0, 1) is True
    assert dsu.union(1, 0) is False
    assert dsu.union(1, 2) is True
    assert dsu.component_count == 1


def test_find_idempotent():
    dsu = DsuState(10)
    for u, v in [(0, 1), (1, 2), (5, 6), (6, 7), (2, 5)]:
        dsu.union(u, v)
    for v in range(10):
        assert dsu.find(dsu.find(v)) == dsu.find(v)


def test_single_vertex():
    dsu = DsuState(1)
    out = census(dsu)
    assert out.component_count == 1
    assert out.is_connected
    assert out.largest == 1
    assert out.y0 == 1


def test_out_of_range_ids():
    dsu = DsuState(4)
    with pytest.raises(IndexError):
        dsu.find(4)
    with pytest.raises(IndexError):
        dsu.union(0, -1)


def test_census_fresh():
    out = census(DsuState(5))
    assert out == ComponentCensus(
        is_connected=False,
        component_count=5,
        largest=1,
        y0=5,
        size_histogram={1: 5},
    )


def test_census_path():
    dsu = DsuState(5)
    for u, v in [(0, 1), (1, 2), (2, 3), (3, 4)]:
        dsu.union(u, v)
    out = census(dsu)
    assert out.is_connected
    assert out.component_count == 1
    assert out.y0 == 0
    assert out.size_histogram == {5: 1}


def test_census_two_pairs():
    dsu = DsuState(5)
    dsu.union(0, 1)
    dsu.union(2, 3)
    out = census(dsu)
    assert out.size_histogram == {2: 2, 1: 1}
    assert out.y0 == 1
    assert out.largest == 2


def test_census_invariants_random():
    rng = random.Random(13)
    for _ in range(200):
        n = rng.randint(1, 60)
        dsu = DsuState(n)
        for _ in range(rng.randint(0, 2 * n)):
            dsu.union(rng.randrange(n), rng.randrange(n))
        out = census(dsu)
        assert sum(s * c for s, c in out.size_histogram.items()) == n
        assert out.y0 == out.size_histogram.get(1, 0)
        assert (out.component_count == 1) == out.is_connected == (out.largest == n)


def test_census_matches_bfs_on_random_graphs():
    rng = random.Random(99)
    for _ in range(1000):
        n = rng.randint(1, 200)
        edge_count = rng.randint(0, int(1.5 * n))
        edges = [
            (rng.randrange(n), rng.randrange(n)) for _ in range(edge_count)
        ]
        dsu = DsuState(n)
        for u, v in edges:
            if u != v:
                dsu.union(u, v)
        clean = [(u, v) for u, v in edges if u != v]
        assert census(dsu) == bfs_census(n, clean)


def test_census_from_size_counts_matches_census():
    rng = random.Random(7)
    n = 50
    dsu = DsuState(n)
    for _ in range(40):
        dsu.union(rng.randrange(n), rng.randrange(n))
    reference = census(dsu)
    counts = np.zeros(n + 1, dtype=np.int64)
    for size, k in reference.size_histogram.items():
        counts[size] = k
    assert census_from_size_counts(counts, reference.component_count) == reference
