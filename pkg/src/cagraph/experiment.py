"""Monte Carlo harness: replicated runs, sweeps over the threshold
coordinate, isolated-vertex statistics against their Poisson limit.

Replicate r of a point always uses substream(seed, r), and results are
reduced in replicate order, so output is byte-identical for any worker
count.  All points of a sweep share the seed; because a larger community
count extends the same draw sequence, realizations at smaller c contain
those at larger c and the estimated connectivity curve is monotone
replicate by replicate.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .analytic import m_for_c, poisson_pmf, threshold_quantities
from .laws import CommunityLaw, LawValidationError, validate
from .sampler import GraphConfig, sample_graph

logger = logging.getLogger(__name__)

ENV_THREADS = "THREADS"

# Phi^{-1}(0.975), pinned so intervals never depend on a scipy version
_Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> Tuple[float, float]:
    """95% Wilson score interval for a binomial proportion.

    Stays honest near 0 and 1, which is where the connectivity curve ends
    up on either side of the threshold.
    """
    if trials <= 0:
        return (0.0, 1.0)
    p_hat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p_hat + z2 / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(p_hat * (1.0 - p_hat) / trials + z2 / (4.0 * trials * trials))
    # the bounds are exactly 0 and 1 at the endpoints; avoid float residue
    low = 0.0 if successes == 0 else max(0.0, center - half)
    high = 1.0 if successes == trials else min(1.0, center + half)
    return (low, high)


def resolve_workers(workers: Optional[int] = None) -> int:
    """Explicit argument, else the THREADS env var, else the CPU count."""
    if workers is not None:
        if workers < 1:
            raise ValueError("workers must be positive")
        return int(workers)
    env = os.environ.get(ENV_THREADS)
    if env is not None and env.strip():
        try:
            value = int(env)
        except ValueError:
            value = 0
        if value < 1:
            raise ValueError(f"{ENV_THREADS} must be a positive integer, got {env!r}")
        return value
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SweepSpec:
    """A sweep over threshold coordinates c (or over explicit m values)."""

    n: int
    law: CommunityLaw
    c_values: Tuple[float, ...] = ()
    replicates: int = 1000
    master_seed: int = 0
    mode: str = "sweep"  # "sweep" | "fixed-m"
    m_values: Tuple[int, ...] = ()


@dataclass(frozen=True)
class ThresholdPoint:
    """Estimates for one (c, n, m) cell of a sweep.

    ``kappa_truncated`` and ``y0_histogram`` ride along for reports; the
    serialized row carries exactly the CSV columns (the JSON mirror adds
    the histogram).
    """

    c: float
    n: int
    m: int
    lam: float
    p_pred: float
    replicates: int
    connected_count: int
    p_hat: float
    ci_low: float
    ci_high: float
    y0_mean: float
    y0_var: float
    fm1: float
    fm2: float
    fm3: float
    fm4: float
    seed: int
    y0_histogram: Dict[int, int]
    kappa_truncated: float


def run_point(
    n: int,
    m: int,
    law: CommunityLaw,
    replicates: int,
    master_seed: int,
    workers: Optional[int] = None,
    c: Optional[float] = None,
) -> ThresholdPoint:
    """Estimate connectivity and isolated-vertex statistics at fixed (n, m).

    ``c`` labels the row; it defaults to the realized threshold coordinate
    when the point was not produced by a sweep.
    """
    if replicates < 1:
        raise ValueError("replicates >= 1 required")
    tq = threshold_quantities(n, m, law)
    config = GraphConfig(n=n, m=m, law=law, seed=master_seed)

    connected = np.zeros(replicates, dtype=np.uint8)
    y0s = np.zeros(replicates, dtype=np.int64)

    def one(r: int) -> None:
        result = sample_graph(config, r)
        connected[r] = 1 if result.is_connected else 0
        y0s[r] = result.y0

    nworkers = resolve_workers(workers)
    if nworkers == 1 or replicates == 1:
        for r in range(replicates):
            one(r)
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            list(pool.map(one, range(replicates)))

    connected_count = int(connected.sum())
    p_hat = connected_count / replicates
    ci_low, ci_high = wilson_interval(connected_count, replicates)

    values, counts = np.unique(y0s, return_counts=True)
    histogram = {int(v): int(k) for v, k in zip(values, counts)}

    ff = y0s.astype(np.float64)
    running = ff.copy()
    fms = [float(running.mean())]
    for r in range(2, 5):
        running = running * (ff - (r - 1))
        fms.append(float(running.mean()))

    return ThresholdPoint(
        c=float(c) if c is not None else tq.lam,
        n=n,
        m=m,
        lam=tq.lam,
        p_pred=tq.p_pred,
        replicates=replicates,
        connected_count=connected_count,
        p_hat=p_hat,
        ci_low=ci_low,
        ci_high=ci_high,
        y0_mean=float(ff.mean()),
        y0_var=float(y0s.var(ddof=1)) if replicates > 1 else 0.0,
        fm1=fms[0],
        fm2=fms[1],
        fm3=fms[2],
        fm4=fms[3],
        seed=master_seed,
        y0_histogram=histogram,
        kappa_truncated=tq.kappa_truncated,
    )


def run_sweep(spec: SweepSpec, workers: Optional[int] = None) -> List[ThresholdPoint]:
    """Run every cell of a sweep; rows come back ordered by c."""
    errors = validate(spec.law)
    if errors:
        raise LawValidationError(errors)
    if spec.replicates < 1:
        raise ValueError("replicates >= 1 required")

    points = []
    if spec.mode == "sweep":
        if not spec.c_values:
            raise ValueError("c_values must be nonempty in sweep mode")
        for c in sorted(spec.c_values):
            m = m_for_c(spec.n, c, spec.law)
            points.append(
                run_point(
                    spec.n, m, spec.law, spec.replicates, spec.master_seed,
                    workers=workers, c=c,
                )
            )
    elif spec.mode == "fixed-m":
        if not spec.m_values:
            raise ValueError("m_values must be nonempty in fixed-m mode")
        for m in spec.m_values:
            points.append(
                run_point(
                    spec.n, m, spec.law, spec.replicates, spec.master_seed,
                    workers=workers,
                )
            )
    else:
        raise ValueError(f"unknown sweep mode {spec.mode!r}")

    _report_monotonicity(points)
    return points


def _report_monotonicity(points: List[ThresholdPoint]) -> None:
    # p_hat should decrease along c up to Monte Carlo noise; log, don't fail
    for earlier, later in zip(points, points[1:]):
        se_e = math.sqrt(max(earlier.p_hat * (1 - earlier.p_hat), 0.0) / earlier.replicates)
        se_l = math.sqrt(max(later.p_hat * (1 - later.p_hat), 0.0) / later.replicates)
        if earlier.p_hat + 3 * se_e < later.p_hat - 3 * se_l:
            logger.warning(
                "connectivity estimate not monotone: p_hat(c=%g)=%g < p_hat(c=%g)=%g",
                earlier.c, earlier.p_hat, later.c, later.p_hat,
            )


@dataclass(frozen=True)
class Y0PoissonReport:
    """Comparison of the isolated-vertex distribution to Poisson(e**lambda)."""

    poisson_mean: float
    y0_mean: float
    tv_distance: float
    moment_ratios: Tuple[float, float, float, float]
    kappa_zero: bool


def y0_poisson_test(point: ThresholdPoint) -> Y0PoissonReport:
    """Total-variation distance and factorial-moment ratios for Y0.

    The reference distribution is Poisson with mean exp(lambda); ratios are
    the empirical factorial moments over their limits exp(r * lambda).
    A law with kappa~ = 0 cannot place edges, so Y0 is identically n and
    the comparison is flagged as meaningless.
    """
    if point.replicates < 500:
        raise ValueError("y0_poisson_test needs at least 500 replicates")
    kappa_zero = bool(point.kappa_truncated == 0.0)
    try:
        mean = math.exp(point.lam)
    except OverflowError:
        mean = math.inf

    if not math.isfinite(mean) or mean <= 0.0:
        nan = float("nan")
        return Y0PoissonReport(mean, point.y0_mean, nan, (nan,) * 4, kappa_zero)

    support_end = max(point.y0_histogram) + 5
    tv = 0.0
    pois_mass = 0.0
    for j in range(support_end + 1):
        pj = poisson_pmf(mean, j)
        pois_mass += pj
        empirical = point.y0_histogram.get(j, 0) / point.replicates
        tv += abs(empirical - pj)
    tv = 0.5 * (tv + max(0.0, 1.0 - pois_mass))

    ratios = []
    for r, fm in enumerate((point.fm1, point.fm2, point.fm3, point.fm4), start=1):
        ratios.append(fm / mean ** r)
    return Y0PoissonReport(
        poisson_mean=mean,
        y0_mean=point.y0_mean,
        tv_distance=tv,
        moment_ratios=tuple(ratios),
        kappa_zero=kappa_zero,
    )


# ---------------------------------------------------------------------------
# Serialization

CSV_COLUMNS = (
    "c", "n", "m", "lambda", "p_pred", "replicates", "connected_count",
    "p_hat", "ci_low", "ci_high", "y0_mean", "y0_var",
    "fm1", "fm2", "fm3", "fm4", "seed",
)


def _row_values(point: ThresholdPoint):
    return (
        point.c, point.n, point.m, point.lam, point.p_pred, point.replicates,
        point.connected_count, point.p_hat, point.ci_low, point.ci_high,
        point.y0_mean, point.y0_var, point.fm1, point.fm2, point.fm3,
        point.fm4, point.seed,
    )


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))  # plain-float repr even for numpy scalars
    return str(value)


def points_to_csv(points: List[ThresholdPoint]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for point in points:
        lines.append(",".join(_fmt(v) for v in _row_values(point)))
    return "\n".join(lines) + "\n"


def point_to_jsonable(point: ThresholdPoint) -> dict:
    row = dict(zip(CSV_COLUMNS, _row_values(point)))
    row["y0_histogram"] = {str(k): v for k, v in sorted(point.y0_histogram.items())}
    return row


def points_to_json(points: List[ThresholdPoint]) -> str:
    return json.dumps([point_to_jsonable(p) for p in points], indent=2) + "\n"
