"""Single-realization sampling of a random community affiliation graph.

``sample_graph`` streams every community's edges directly into a
disjoint-set forest; edges are never materialized.  The same realization is
produced by the compiled kernel and by the pure-python composition of the
public ops below, because both consume the shared SplitMix64 stream in
exactly the same order:

    per community:  x draw, q draw (one uniform when jointly coupled),
                    one bounded draw per subset element,
                    one uniform per geometric gap (none when q is 0 or 1).

Set ``CAGRAPH_DEBUG=1`` to cross-check the singleton count against the
degree-zero bitset on every realization.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from . import _kernels
from .connectivity import ComponentCensus, DsuState, census, census_from_size_counts
from .laws import CommunityLaw, LawValidationError, compile_tables, sample_pair, validate
from .rng import RandomState, substream_seed

EdgeSink = Callable[[int, int], None]


@dataclass(frozen=True)
class GraphConfig:
    """One simulation ensemble: vertex count, community count, law, seed."""

    n: int
    m: int
    law: CommunityLaw
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n >= 1 required")
        if self.m < 0:
            raise ValueError("m >= 0 required")
        errors = validate(self.law)
        if errors:
            raise LawValidationError(errors)


def sample_vertex_subset(n: int, x: int, rng: RandomState) -> List[int]:
    """Uniform x-subset of [0, n) in O(x) via sparse Fisher-Yates.

    The identity permutation is virtual; only displaced slots live in a
    scratch map, so no O(n) reset is ever paid.
    """
    if not 0 <= x <= n:
        raise ValueError("0 <= x <= n required")
    slot = {}
    out = []
    for t in range(x):
        r = t + rng.below(n - t)
        out.append(slot.get(r, r))
        slot[r] = slot.get(t, t)
    return out


def sample_community_edges(subset, q: float, rng: RandomState, sink: EdgeSink) -> int:
    """Emit each of the C(x, 2) pairs independently with probability q.

    For 0 < q < 1 the pair index jumps by geometric gaps, so the cost is
    proportional to the number of retained pairs; the (row, col) unranking
    advances incrementally with the gap.
    """
    x = len(subset)
    if x < 2 or q <= 0.0:
        return 0
    emitted = 0
    if q >= 1.0:
        for a in range(x):
            for b in range(a + 1, x):
                sink(subset[a], subset[b])
                emitted += 1
        return emitted
    total = x * (x - 1) // 2
    ln_keep = math.log1p(-q)
    t = 0
    row = 0
    col = 1
    while True:
        g = math.log(rng.u01()) / ln_keep
        if g >= float(total - t):
            return emitted
        gi = int(g)
        t += gi
        col += gi
        while col >= x:
            excess = col - x
            row += 1
            col = row + 1 + excess
        sink(subset[row], subset[col])
        emitted += 1
        t += 1
        col += 1


def _debug_enabled() -> bool:
    return os.environ.get("CAGRAPH_DEBUG", "").strip() not in ("", "0")


def sample_graph(config: GraphConfig, replicate: int, dump_edges=None) -> ComponentCensus:
    """One realization of the ensemble, deterministic in (config, replicate).

    ``dump_edges``: optional text stream receiving one "u v" line per
    emitted edge (forces the pure-python path; the realization is identical
    by the backend parity contract).
    """
    if _kernels.BACKEND == "numba" and dump_edges is None:
        return _sample_graph_kernel(config, replicate)
    return _sample_graph_python(config, replicate, dump_edges)


def _sample_graph_kernel(config: GraphConfig, replicate: int) -> ComponentCensus:
    tables = compile_tables(config.law)
    counts = np.zeros(config.n + 1, dtype=np.int64)
    ncomp, _largest, y0, degree_zero, _trials, _edges = _kernels.simulate_replicate(
        config.n,
        config.m,
        tables.cell_mode,
        tables.x_off,
        tables.x_vals,
        tables.x_cum,
        tables.q_off,
        tables.q_vals,
        tables.q_cum,
        tables.q_lo,
        tables.q_hi,
        np.uint64(substream_seed(config.seed, replicate)),
        counts,
    )
    out = census_from_size_counts(counts, int(ncomp))
    if _debug_enabled() and out.y0 != int(degree_zero):
        raise AssertionError(
            f"singleton count {out.y0} != degree-zero count {int(degree_zero)}"
        )
    return out


def _sample_graph_python(
    config: GraphConfig, replicate: int, dump_edges=None
) -> ComponentCensus:
    rng = RandomState(substream_seed(config.seed, replicate))
    dsu = DsuState(config.n)
    touched = bytearray(config.n)

    if dump_edges is None:

        def sink(u, v):
            touched[u] = 1
            touched[v] = 1
            dsu.union(u, v)

    else:

        def sink(u, v):
            touched[u] = 1
            touched[v] = 1
            dsu.union(u, v)
            dump_edges.write(f"{u} {v}\n")

    for i in range(config.m):
        x, q = sample_pair(config.law, i, config.n, rng)
        subset = sample_vertex_subset(config.n, x, rng)
        sample_community_edges(subset, q, rng, sink)

    out = census(dsu)
    if _debug_enabled():
        degree_zero = config.n - sum(touched)
        if out.y0 != degree_zero:
            raise AssertionError(
                f"singleton count {out.y0} != degree-zero count {degree_zero}"
            )
    return out


@dataclass(frozen=True)
class ReplicateDiagnostics:
    """Instrumented replicate result used by the work-bound tests."""

    census: ComponentCensus
    pair_trials: int
    edges: int
    degree_zero: int
    rng_draws: Optional[int]


def replicate_diagnostics(config: GraphConfig, replicate: int) -> ReplicateDiagnostics:
    """Run one replicate and report sampler effort counters."""
    if _kernels.BACKEND == "numba":
        tables = compile_tables(config.law)
        counts = np.zeros(config.n + 1, dtype=np.int64)
        ncomp, _l, _y0, degree_zero, trials, edges = _kernels.simulate_replicate(
            config.n,
            config.m,
            tables.cell_mode,
            tables.x_off,
            tables.x_vals,
            tables.x_cum,
            tables.q_off,
            tables.q_vals,
            tables.q_cum,
            tables.q_lo,
            tables.q_hi,
            np.uint64(substream_seed(config.seed, replicate)),
            counts,
        )
        return ReplicateDiagnostics(
            census=census_from_size_counts(counts, int(ncomp)),
            pair_trials=int(trials),
            edges=int(edges),
            degree_zero=int(degree_zero),
            rng_draws=None,
        )

    rng = RandomState(substream_seed(config.seed, replicate))
    dsu = DsuState(config.n)
    touched = bytearray(config.n)
    edges = 0
    trials = 0

    def sink(u, v):
        nonlocal edges
        touched[u] = 1
        touched[v] = 1
        dsu.union(u, v)
        edges += 1

    for i in range(config.m):
        x, q = sample_pair(config.law, i, config.n, rng)
        subset = sample_vertex_subset(config.n, x, rng)
        before = rng.calls
        sample_community_edges(subset, q, rng, sink)
        if min(x, config.n) >= 2 and 0.0 < q < 1.0:
            trials += rng.calls - before
    return ReplicateDiagnostics(
        census=census(dsu),
        pair_trials=trials,
        edges=edges,
        degree_zero=config.n - sum(touched),
        rng_draws=rng.calls,
    )
