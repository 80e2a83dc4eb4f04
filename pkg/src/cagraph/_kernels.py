"""Compiled replicate kernel with backend selection.

One call simulates a full realization: every community draws its (size,
density) pair, a uniform vertex subset via sparse Fisher-Yates, and its
Bernoulli pairs by geometric skipping, all streamed straight into an
inline union-find.  Work scales with communities plus retained pair
trials, never with n**2.

The RNG arithmetic mirrors ``rng.RandomState`` bit for bit (SplitMix64 on
wrapping uint64), so the compiled path and the pure-python path in
``sampler`` produce identical realizations.  ``CAGRAPH_BACKEND`` selects
the path: "numba" (default when importable) or "numpy".
"""

import math
import os

import numpy as np

ENV_BACKEND = "CAGRAPH_BACKEND"

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        # numba missing: leave a marker so the jitted entry points stay unused
        def wrap(fn):
            fn.__numba_unavailable__ = True
            return fn

        if len(args) == 1 and callable(args[0]):
            return wrap(args[0])
        return wrap


def _resolve_backend() -> str:
    want = os.environ.get(ENV_BACKEND, "auto").strip().lower()
    if want in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if want == "numba":
        if not HAVE_NUMBA:
            raise ImportError(f"{ENV_BACKEND}=numba requested but numba is not importable")
        return "numba"
    if want in ("numpy", "python"):
        return "numpy"
    raise ValueError(f"{ENV_BACKEND} must be auto, numba or numpy, got {want!r}")


BACKEND = _resolve_backend()

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_TWO_NEG53 = 2.0 ** -53


@njit(cache=True, nogil=True)
def _mix64(z):
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


@njit(cache=True, nogil=True)
def _next_u64(st):
    st[0] = st[0] + _GOLDEN
    return _mix64(st[0])


@njit(cache=True, nogil=True)
def _u01(st):
    # open interval (0, 1); safe under log()
    return (np.float64(_next_u64(st) >> _U64(11)) + 0.5) * _TWO_NEG53


@njit(cache=True, nogil=True)
def _below(st, bound):
    # unbiased integer in [0, bound) by rejection; bound is a positive int64
    r = _U64(bound)
    threshold = (_U64(0) - r) % r  # == 2**64 mod bound
    while True:
        u = _next_u64(st)
        if u >= threshold:
            return np.int64(u % r)


@njit(cache=True, nogil=True)
def _searchcum(cum, lo, hi, u):
    # leftmost index in [lo, hi) with cum[index] > u
    while lo < hi:
        mid = (lo + hi) // 2
        if cum[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    return lo


@njit(cache=True, nogil=True)
def _find(parent, v):
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


@njit(cache=True, nogil=True)
def simulate_replicate(
    n,
    m,
    cell_mode,
    x_off,
    x_vals,
    x_cum,
    q_off,
    q_vals,
    q_cum,
    q_lo,
    q_hi,
    stream_seed,
    size_counts,
):
    """Simulate one realization and fill its component-size counts.

    ``size_counts`` must be a zeroed int64 array of length n + 1; entry s
    receives the number of components of size s.  Returns
    (component_count, largest, y0, degree_zero, pair_trials, edges) where
    pair_trials counts geometric gap draws and edges counts emitted pairs
    (duplicates across communities included).
    """
    st = np.empty(1, np.uint64)
    st[0] = stream_seed

    parent = np.empty(n, np.int64)
    csize = np.empty(n, np.int64)
    for v in range(n):
        parent[v] = v
        csize[v] = 1
    # sparse Fisher-Yates scratch; epoch stamps avoid O(n) clears
    slot_val = np.empty(n, np.int64)
    slot_epoch = np.zeros(n, np.int64)
    subset = np.empty(n, np.int64)
    touched = np.zeros(n, np.uint8)

    ncomp = np.int64(n)
    ncells = np.int64(cell_mode.shape[0])
    pair_trials = np.int64(0)
    edges = np.int64(0)

    for i in range(m):
        cell = i % ncells
        # (x, q) draw; JOINT consumes one uniform, the other modes two
        lo = x_off[cell]
        hi = x_off[cell + 1]
        idx = _searchcum(x_cum, lo, hi, _u01(st))
        x = x_vals[idx]
        mode = cell_mode[cell]
        if mode == 2:
            q = q_vals[q_off[cell] + (idx - lo)]
        elif mode == 1:
            u2 = _u01(st)
            q = q_lo[cell] + u2 * (q_hi[cell] - q_lo[cell])
        else:
            j = _searchcum(q_cum, q_off[cell], q_off[cell + 1], _u01(st))
            q = q_vals[j]
        xt = x if x < n else n

        epoch = np.int64(i + 1)
        for t in range(xt):
            r = t + _below(st, n - t)
            if slot_epoch[r] == epoch:
                chosen = slot_val[r]
            else:
                chosen = np.int64(r)
            if slot_epoch[t] == epoch:
                cur = slot_val[t]
            else:
                cur = np.int64(t)
            slot_val[r] = cur
            slot_epoch[r] = epoch
            subset[t] = chosen

        if xt < 2 or q <= 0.0:
            continue
        if q >= 1.0:
            for a in range(xt):
                va = subset[a]
                for b in range(a + 1, xt):
                    vb = subset[b]
                    touched[va] = 1
                    touched[vb] = 1
                    edges += 1
                    ra = _find(parent, va)
                    rb = _find(parent, vb)
                    if ra != rb:
                        if csize[ra] < csize[rb]:
                            ra, rb = rb, ra
                        parent[rb] = ra
                        csize[ra] += csize[rb]
                        ncomp -= 1
            continue

        # geometric skipping over the C(xt, 2) pair indices in row-major
        # order; (row, col) tracks the current pair incrementally
        total = xt * (xt - 1) // 2
        ln_keep = math.log1p(-q)
        t = np.int64(0)
        row = np.int64(0)
        col = np.int64(1)
        while True:
            u = _u01(st)
            pair_trials += 1
            g = math.log(u) / ln_keep
            if g >= np.float64(total - t):
                break
            gi = np.int64(g)
            t += gi
            col += gi
            while col >= xt:
                excess = col - xt
                row += 1
                col = row + 1 + excess
            va = subset[row]
            vb = subset[col]
            touched[va] = 1
            touched[vb] = 1
            edges += 1
            ra = _find(parent, va)
            rb = _find(parent, vb)
            if ra != rb:
                if csize[ra] < csize[rb]:
                    ra, rb = rb, ra
                parent[rb] = ra
                csize[ra] += csize[rb]
                ncomp -= 1
            t += 1
            col += 1

    largest = np.int64(0)
    degree_zero = np.int64(0)
    for v in range(n):
        if touched[v] == 0:
            degree_zero += 1
        if parent[v] == v:
            s = csize[v]
            size_counts[s] += 1
            if s > largest:
                largest = s
    return ncomp, largest, size_counts[1], degree_zero, pair_trials, edges


if not HAVE_NUMBA:
    # without numba the python semantics of the uint64 helpers are wrong
    # (numpy scalar overflow); the sampler module provides the fallback
    simulate_replicate = None
