"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s`.  Criteria 1-4 are
statistical reproductions at n = 10**4 with the stated finite-size
allowances; 5-9 are exact or property-based.  The replicated grid at
c in {-2..2} is shared between criteria 1 and 3.
"""

import math
import os
import subprocess
import sys
from itertools import combinations

import numpy as np
import pytest

from cagraph import (
    CommunityLaw,
    DensityLaw,
    SizeLaw,
    kappa,
    m_for_c,
    p_degree_positive,
    p_pair_degree_positive,
    qk_bound_a,
    qk_bound_b,
    qk_exact,
    run_point,
    sample_community_edges,
    sample_pair,
    sample_vertex_subset,
    y0_poisson_test,
)
from cagraph.rng import RandomState

N_STD = 10 ** 4
GRID_REPLICATES = 2000
GRID_SEED = 20240801


def _report(name: str, ok: bool, detail: str = "") -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _standard_law():
    return CommunityLaw.iid(SizeLaw.point(3), DensityLaw.point(0.5))


@pytest.fixture(scope="module")
def threshold_grid():
    law = _standard_law()
    points = {}
    for c in (-2.0, -1.0, 0.0, 1.0, 2.0):
        m = m_for_c(N_STD, c, law)
        points[c] = run_point(
            N_STD, m, law, replicates=GRID_REPLICATES, master_seed=GRID_SEED, c=c
        )
    return points


def test_criterion_1_threshold_curve(threshold_grid):
    details = []
    ok = True
    for c, point in sorted(threshold_grid.items()):
        target = math.exp(-math.exp(c))
        half_width = (point.ci_high - point.ci_low) / 2
        tolerance = max(3 * half_width, 0.05)
        gap = abs(point.p_hat - target)
        ok = ok and gap <= tolerance
        details.append(f"c={c:+.0f} p_hat={point.p_hat:.4f} target={target:.4f} gap={gap:.4f} tol={tolerance:.4f}")
    _report("criterion 1 (threshold curve)", ok, "; ".join(details))


def test_criterion_2_zero_one_endpoints():
    law = _standard_law()
    low = run_point(N_STD, m_for_c(N_STD, -6.0, law), law, replicates=500, master_seed=GRID_SEED + 1, c=-6.0)
    high = run_point(N_STD, m_for_c(N_STD, 4.0, law), law, replicates=500, master_seed=GRID_SEED + 2, c=4.0)
    ok = low.p_hat >= 0.99 and high.p_hat <= 0.01
    _report(
        "criterion 2 (zero-one endpoints)",
        ok,
        f"p_hat(c=-6)={low.p_hat:.4f} (need >= 0.99), p_hat(c=+4)={high.p_hat:.4f} (need <= 0.01)",
    )


def test_criterion_3_poisson_isolated_vertices(threshold_grid):
    details = []
    ok = True
    for c in (0.0, 1.0):
        point = threshold_grid[c]
        report = y0_poisson_test(point)
        mean_target = math.exp(c)
        mean_ok = abs(point.y0_mean - mean_target) <= 0.10 * mean_target
        ratio_ok = all(0.8 <= report.moment_ratios[r] <= 1.25 for r in (0, 1))
        ok = ok and mean_ok and ratio_ok
        details.append(
            f"c={c:+.0f} y0_mean={point.y0_mean:.3f} (target {mean_target:.3f}) "
            f"fm1/e^c={report.moment_ratios[0]:.3f} fm2/e^2c={report.moment_ratios[1]:.3f}"
        )
    _report("criterion 3 (Poisson isolated vertices)", ok, "; ".join(details))


def test_criterion_4_noniid_parity():
    pattern = CommunityLaw.noniid(
        [
            (SizeLaw.point(2), DensityLaw.point(1.0)),
            (SizeLaw.point(4), DensityLaw.point(0.25)),
        ]
    )
    mixture = CommunityLaw.iid(coupling=[(2, 1.0, 0.5), (4, 0.25, 0.5)])
    kap_gap = abs(kappa(pattern, N_STD).kappa_truncated - kappa(mixture, N_STD).kappa_truncated)
    m = m_for_c(N_STD, 0.0, mixture)
    reps = 1000
    a = run_point(N_STD, m, pattern, replicates=reps, master_seed=GRID_SEED + 3)
    b = run_point(N_STD, m, mixture, replicates=reps, master_seed=GRID_SEED + 4)
    pooled = math.sqrt(
        a.p_hat * (1 - a.p_hat) / reps + b.p_hat * (1 - b.p_hat) / reps
    )
    gap = abs(a.p_hat - b.p_hat)
    ok = kap_gap <= 1e-12 and gap <= 3 * pooled
    _report(
        "criterion 4 (noniid parity)",
        ok,
        f"kappa gap={kap_gap:.2e}, p_hat {a.p_hat:.4f} vs {b.p_hat:.4f}, "
        f"gap={gap:.4f} <= 3*pooled={3 * pooled:.4f}",
    )


def _qk_brute(n, k, x, q):
    if x <= 1:
        return 1.0
    total = 0.0
    count = 0
    for subset in combinations(range(n), x):
        inside = sum(1 for v in subset if v < k)
        total += (1.0 - q) ** (inside * (x - inside))
        count += 1
    return total / count


def test_criterion_5_exact_oracle_equivalence():
    worst = 0.0
    checks = 0
    for n in range(1, 11):
        for k in range(n + 1):
            for x in range(n + 1):
                for q in (0.0, 0.25, 0.5, 0.75, 1.0):
                    gap = abs(qk_exact(n, k, x, q) - _qk_brute(n, k, x, q))
                    worst = max(worst, gap)
                    checks += 1
    ok = worst <= 1e-12
    _report(
        "criterion 5 (exact oracle equivalence)",
        ok,
        f"{checks} cases, worst |exact - brute| = {worst:.2e} (tol 1e-12)",
    )


def test_criterion_6_bound_dominance():
    violations = 0
    checks = 0
    for n in range(4, 65):
        for k in range(1, n // 2 + 1):
            for x in range(2, n + 1):
                for qi in range(11):
                    q = qi / 10
                    exact = qk_exact(n, k, x, q)
                    checks += 1
                    if exact > qk_bound_a(n, k, x, q) + 1e-12:
                        violations += 1
                    if exact > qk_bound_b(n, k, x, q) + 1e-12:
                        violations += 1
    _report(
        "criterion 6 (bound dominance)",
        violations == 0,
        f"{checks} grid cells, {violations} violations",
    )


def test_criterion_7_sampler_retention():
    subset = list(range(8))
    pairs = list(combinations(subset, 2))
    reps = 10 ** 5
    ok = True
    details = []
    for q in (0.1, 0.5, 0.9):
        rng = RandomState(int(1000 * q) + 17)
        counts = {p: 0 for p in pairs}
        sizes = np.zeros(reps, dtype=np.int64)

        def sink(u, v):
            counts[(u, v) if u < v else (v, u)] += 1

        for r in range(reps):
            sizes[r] = sample_community_edges(subset, q, rng, sink)
        pair_tol = 4 * math.sqrt(q * (1 - q) / reps)
        worst = max(abs(c / reps - q) for c in counts.values())
        mean_edges = float(sizes.mean())
        mean_tol = 3 * math.sqrt(28 * q * (1 - q) / reps)
        var_edges = float(sizes.var(ddof=1))
        expected_var = 28 * q * (1 - q)
        this_ok = (
            worst <= pair_tol
            and abs(mean_edges - 28 * q) <= mean_tol
            and abs(var_edges - expected_var) <= 0.1 * expected_var
        )
        ok = ok and this_ok
        details.append(
            f"q={q}: worst pair dev={worst:.5f} (tol {pair_tol:.5f}), "
            f"mean edges={mean_edges:.3f} vs {28 * q:.1f} (tol {mean_tol:.3f}), "
            f"var={var_edges:.2f} vs {expected_var:.2f}"
        )
    _report("criterion 7 (sampler retention)", ok, "; ".join(details))


def test_criterion_8_degree_formulas():
    n = 10
    draws = 10 ** 6
    law = _standard_law()
    rng = RandomState(GRID_SEED + 8)
    single_hits = 0
    pair_hits = 0
    touched = set()

    def sink(u, v):
        touched.add(u)
        touched.add(v)

    for i in range(draws):
        x, q = sample_pair(law, i, n, rng)
        subset = sample_vertex_subset(n, x, rng)
        touched.clear()
        sample_community_edges(subset, q, rng, sink)
        if 0 in touched:
            single_hits += 1
            if 1 in touched:
                pair_hits += 1

    p_single = single_hits / draws
    p_pair = pair_hits / draws
    target_single = p_degree_positive(n, law)
    target_pair = p_pair_degree_positive(n, law)
    se_single = math.sqrt(p_single * (1 - p_single) / draws)
    se_pair = math.sqrt(p_pair * (1 - p_pair) / draws)
    ok = (
        abs(p_single - target_single) <= 4 * se_single
        and abs(p_pair - target_pair) <= 4 * se_pair
    )
    _report(
        "criterion 8 (degree formulas)",
        ok,
        f"single {p_single:.5f} vs {target_single:.5f} (4se={4 * se_single:.5f}); "
        f"pair {p_pair:.5f} vs {target_pair:.5f} (4se={4 * se_pair:.5f})",
    )


def test_criterion_9_determinism(tmp_path):
    import json

    from cagraph import law_to_jsonable

    law_path = tmp_path / "law.json"
    law_path.write_text(json.dumps(law_to_jsonable(_standard_law())))
    outputs = []
    for threads, name in (("1", "a.csv"), ("8", "b.csv")):
        out = tmp_path / name
        env = os.environ.copy()
        env["THREADS"] = threads
        result = subprocess.run(
            [
                sys.executable, "-m", "cagraph", "sweep",
                "--n", "2000", "--law", str(law_path), "--c", "-1,0,1",
                "--reps", "200", "--seed", "424242", "--out", str(out),
            ],
            capture_output=True,
            text=True,
            env=env,
        )
        assert result.returncode == 0, result.stderr
        outputs.append(out.read_bytes())
    ok = outputs[0] == outputs[1]
    _report(
        "criterion 9 (thread-count determinism)",
        ok,
        f"THREADS=1 vs THREADS=8 CSV bytes identical: {ok} ({len(outputs[0])} bytes)",
    )
