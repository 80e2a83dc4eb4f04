"""Closed-form quantities for the connectivity threshold of community graphs.

Everything here is an exact finite sum over the (finite) law supports, so
there are no quadrature tolerances.  Powers of (1 - q) go through
``exp(e * log1p(-q))`` with the convention 0**0 = 1, which keeps precision
near q = 1 and makes h(x, 1) behave correctly at x <= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .laws import (
    DISCRETE_Q,
    JOINT,
    UNIFORM_Q,
    CommunityLaw,
    law_cells,
)


class DomainError(ValueError):
    """Inputs outside the stated domain of a bound."""


class KappaZeroError(ValueError):
    """The threshold is undefined because kappa vanishes for this law."""


def one_minus_q_pow(q: float, e: float) -> float:
    """(1 - q)**e with 0**0 = 1."""
    if e == 0:
        return 1.0
    if q >= 1.0:
        return 0.0
    if q <= 0.0:
        return 1.0
    return math.exp(e * math.log1p(-q))


def nonisolation_prob(x: int, q: float) -> float:
    """Probability a fixed member of a size-x, density-q community gains
    at least one edge inside it: 1 - (1-q)**max(x-1, 0)."""
    return 1.0 - one_minus_q_pow(q, max(x - 1, 0))


def pair_nonisolation_prob(x: int, q: float) -> float:
    """Probability that, of two fixed members of a size-x density-q
    community, neither is isolated inside it.

    Equals q + (1-q) * (1 - (1-q)**max(x-2, 0))**2 and never exceeds
    ``nonisolation_prob`` for x >= 2.
    """
    inner = 1.0 - one_minus_q_pow(q, max(x - 2, 0))
    return q + (1.0 - q) * inner * inner


@dataclass(frozen=True)
class ThresholdQuantities:
    """Moment and threshold summary for one law at one graph size.

    ``lam`` is the threshold coordinate ln n - (m/n) * kappa_truncated and
    ``p_pred`` = exp(-exp(lam)); both are None when only moments were asked
    for.  Serialized interfaces call ``lam`` "lambda".
    """

    kappa: float
    kappa_truncated: float
    alpha: float
    lam: Optional[float] = None
    p_pred: Optional[float] = None


def _expected_t_pow(qspec, mode, e: float) -> float:
    """E[(1 - Q)**e] for a cell's density component."""
    if e == 0:
        return 1.0
    if mode == UNIFORM_Q:
        a, b = qspec
        # exact antiderivative of (1-q)**e over [a, b]
        return (one_minus_q_pow(a, e + 1) - one_minus_q_pow(b, e + 1)) / ((e + 1) * (b - a))
    qv, qp = qspec
    return float(sum(p * one_minus_q_pow(float(v), e) for v, p in zip(qv, qp)))


def _expected_q(qspec, mode) -> float:
    if mode == UNIFORM_Q:
        a, b = qspec
        return 0.5 * (a + b)
    qv, qp = qspec
    return float(sum(p * float(v) for v, p in zip(qv, qp)))


def _cell_moments(cell, n: Optional[int]):
    """(kappa, kappa_truncated, alpha) for one pattern cell."""
    mode, xv, xp, qspec = cell
    kap = kap_t = alpha = 0.0
    for i, (x, px) in enumerate(zip(xv, xp)):
        x = int(x)
        px = float(px)
        xt = x if n is None else min(x, n)
        if mode == JOINT:
            q = float(qspec[i])
            h_full = nonisolation_prob(x, q)
            h_trunc = nonisolation_prob(xt, q)
            if x >= 2:
                alpha += px * q
        else:
            h_full = 1.0 - _expected_t_pow(qspec, mode, max(x - 1, 0))
            h_trunc = 1.0 - _expected_t_pow(qspec, mode, max(xt - 1, 0))
            if x >= 2:
                alpha += px * _expected_q(qspec, mode)
        kap += px * x * h_full
        kap_t += px * xt * h_trunc
    return kap, kap_t, alpha


def kappa(law: CommunityLaw, n: Optional[int] = None) -> ThresholdQuantities:
    """Mixed moment kappa = E[X h(X, Q)] plus its n-truncated form and alpha.

    For noniid laws this is the average over the pattern, matching the
    per-community average that governs the threshold.  With n=None the
    truncated value equals the untruncated one.
    """
    cells = law_cells(law)
    kap = kap_t = alpha = 0.0
    for cell in cells:
        ck, ckt, ca = _cell_moments(cell, n)
        kap += ck
        kap_t += ckt
        alpha += ca
    ncells = len(cells)
    return ThresholdQuantities(
        kappa=kap / ncells, kappa_truncated=kap_t / ncells, alpha=alpha / ncells
    )


def threshold_quantities(n: int, m: int, law: CommunityLaw) -> ThresholdQuantities:
    """Threshold coordinate lambda = ln n - (m/n) kappa~ and the predicted
    connectivity probability exp(-exp(lambda))."""
    if n < 2:
        raise ValueError("n >= 2 required")
    tq = kappa(law, n)
    lam = math.log(n) - (m / n) * tq.kappa_truncated
    try:
        p_pred = math.exp(-math.exp(lam))
    except OverflowError:
        p_pred = 0.0
    return ThresholdQuantities(
        kappa=tq.kappa,
        kappa_truncated=tq.kappa_truncated,
        alpha=tq.alpha,
        lam=lam,
        p_pred=p_pred,
    )


def m_for_c(n: int, c: float, law: CommunityLaw) -> int:
    """Community count whose threshold coordinate is closest to c.

    The rounding perturbs lambda by at most kappa_truncated / n.  Raises
    ``KappaZeroError`` when kappa~ = 0 (no community can ever place an
    edge, so the threshold is undefined).
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    kap_t = kappa(law, n).kappa_truncated
    if kap_t == 0.0:
        raise KappaZeroError("kappa_zero: law cannot place edges, threshold undefined")
    return max(0, round(n * (math.log(n) - c) / kap_t))


# ---------------------------------------------------------------------------
# Exact crossing probability and its bounds


@lru_cache(maxsize=1 << 17)
def _log_comb(a: int, b: int) -> float:
    if b < 0 or b > a:
        return -math.inf
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def qk_exact(n: int, k: int, x: int, q: float) -> float:
    """Probability that a size-x density-q community places no edge between
    the vertex blocks [k] and [n] minus [k].

    Sums hypergeometric overlap terms in log space: the community subset
    meets the k-block in j vertices with probability C(k,j) C(n-k,x-j) /
    C(n,x) and then avoids all j*(x-j) crossing pairs.
    """
    if not (0 <= k <= n and 0 <= x <= n):
        raise ValueError("0 <= k <= n and 0 <= x <= n required")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q in [0, 1] required")
    if x <= 1 or k == 0 or k == n or q == 0.0:
        return 1.0
    log_cnx = _log_comb(n, x)
    total = 0.0
    for j in range(max(0, x - (n - k)), min(k, x) + 1):
        log_h = _log_comb(k, j) + _log_comb(n - k, x - j) - log_cnx
        total += math.exp(log_h) * one_minus_q_pow(q, j * (x - j))
    return min(total, 1.0)


def _check_bound_domain(n: int, k: int, x: int, q: float) -> None:
    if not (1 <= k and 2 * k <= n and 2 <= x <= n and 0.0 <= q <= 1.0):
        raise DomainError(
            f"domain: need 1 <= k <= n/2, 2 <= x <= n, 0 <= q <= 1 "
            f"(got n={n}, k={k}, x={x}, q={q})"
        )


def qk_bound_a(n: int, k: int, x: int, q: float) -> float:
    """Linear-in-q upper bound on ``qk_exact`` for 1 <= k <= n/2, x >= 2."""
    _check_bound_domain(n, k, x, q)
    return 1.0 - 2.0 * (k * (n - k) / (n * (n - 1.0))) * q


def qk_bound_b(n: int, k: int, x: int, q: float) -> float:
    """Refined upper bound on ``qk_exact`` with second-order corrections."""
    _check_bound_domain(n, k, x, q)
    r1 = (k / (n - k)) ** 2
    kx_over_n = k * x / n
    r2 = math.exp(-kx_over_n) - 1.0 + kx_over_n
    return 1.0 - (kx_over_n - r1 - r2) * nonisolation_prob(x, q)


# ---------------------------------------------------------------------------
# Degree-event probabilities and Poisson reference values


def p_degree_positive(n: int, law: CommunityLaw) -> float:
    """Probability one community gives a fixed vertex positive degree."""
    if n < 1:
        raise ValueError("n >= 1 required")
    return kappa(law, n).kappa_truncated / n


def p_pair_degree_positive(n: int, law: CommunityLaw) -> float:
    """Probability one community gives both of two fixed vertices positive
    degree: E[(X~)(X~-1) / (n(n-1)) * h1(X~, Q)]."""
    if n < 2:
        raise ValueError("n >= 2 required")
    cells = law_cells(law)
    total = 0.0
    for mode, xv, xp, qspec in cells:
        for i, (x, px) in enumerate(zip(xv, xp)):
            xt = min(int(x), n)
            if xt < 2:
                continue
            weight = float(px) * xt * (xt - 1) / (n * (n - 1.0))
            if mode == JOINT:
                total += weight * pair_nonisolation_prob(xt, float(qspec[i]))
            else:
                # h1(x, q) = 1 - 2 t**(e+1) + t**(2e+1) with t = 1-q, e = x-2
                e = xt - 2
                total += weight * (
                    1.0
                    - 2.0 * _expected_t_pow(qspec, mode, e + 1)
                    + _expected_t_pow(qspec, mode, 2 * e + 1)
                )
    return total / len(cells)


def poisson_pmf(mean: float, j: int) -> float:
    """P{Poisson(mean) = j}, computed in log space."""
    if mean <= 0:
        raise ValueError("mean must be positive")
    if j < 0:
        return 0.0
    return math.exp(-mean + j * math.log(mean) - math.lgamma(j + 1))


def poisson_factorial_moment(mean: float, r: int) -> float:
    """E[N (N-1) ... (N-r+1)] = mean**r for N ~ Poisson(mean)."""
    if mean <= 0:
        raise ValueError("mean must be positive")
    return mean ** r
