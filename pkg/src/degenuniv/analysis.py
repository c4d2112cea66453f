"""Edge-count bounds, Chernoff tails and Monte Carlo checks on the block model."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from statistics import NormalDist
from typing import Optional

import numpy as np

from .blockmodel import (
    BlockModelParams,
    HostGraph,
    pair_expectation,
    default_block_constant,
    default_prob_boost,
)
from .embedder import BackMultiset
from .errors import PreconditionError

_MC_CHUNK = 4096


def lower_bound_edges(n: float, d: int) -> float:
    """Minimum edge count of any graph containing all bounded-degree d-degenerate graphs."""
    if n < 1 or d < 1:
        raise PreconditionError("need n >= 1 and d >= 1")
    return n ** (2 - 1 / d) / (1000 * d)


def universality_budget(n: float, d: int) -> float:
    """Edge count sufficient for a universal graph: 80000 n^{2-1/d} ln^{2/d} n (ln ln n)^5."""
    if n < 16:
        raise PreconditionError(f"n too small: {n} < 16")
    ln = math.log(n)
    return 80000 * n ** (2 - 1 / d) * ln ** (2 / d) * math.log(ln) ** 5


def model_edge_bound(n: float, d: int, *, scale: float = 1.0) -> float:
    """High-probability upper bound on the host's edge count, times ``scale``."""
    if n < 16:
        raise PreconditionError(f"n too small: {n} < 16")
    ln = math.log(n)
    return scale * 1e5 * 3.0 ** (2 * d) * n ** (2 - 1 / d) * ln ** (2 / d) * math.log(ln) ** 5


def override_scale(params: BlockModelParams) -> float:
    """Factor by which overrides can raise the expected edge count.

    Edge counts scale with the square of the block constant; pairs with
    ``p < 1`` also scale with the boost, so only boosts above the default
    raise the bound.
    """
    bc = params.block_constant / default_block_constant(params.d)
    boost = params.prob_boost / default_prob_boost(params.n, params.d)
    return bc * bc * max(1.0, boost)


def chernoff_tail(mean: float, delta: float) -> float:
    """Two-sided binomial tail bound ``2 exp(-delta^2 mean / 3)``."""
    if not 0 < delta < 1.5:
        raise PreconditionError("delta must lie in (0, 3/2)")
    if mean < 0:
        raise PreconditionError("mean must be non-negative")
    return 2.0 * math.exp(-delta * delta * mean / 3.0)


def expected_edges(params: BlockModelParams) -> float:
    n = params.levels
    return sum(pair_expectation(params, i, k) for i in range(1, n + 1) for k in range(i, n + 1))


@dataclass
class BoundsReport:
    lower_bound: float
    budget: float
    model_edge_bound: float
    expected_edges: float
    observed_edges: Optional[int] = None

    def to_dict(self) -> dict:
        return asdict(self)


def bounds_report(params: BlockModelParams, host: Optional[HostGraph] = None) -> BoundsReport:
    n, d = params.n, params.d
    return BoundsReport(
        lower_bound=lower_bound_edges(n, d),
        budget=universality_budget(n, d),
        model_edge_bound=model_edge_bound(n, d, scale=override_scale(params)),
        expected_edges=expected_edges(params),
        observed_edges=None if host is None else host.edge_count,
    )


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def _growth(params: BlockModelParams, k: int) -> float:
    """``n^{d^{1-k}-1} (ln n)^2 (ln ln n)^d``."""
    n, d = params.n, params.d
    ln = math.log(n)
    return n ** (d ** (1.0 - k) - 1) * ln**2 * math.log(ln) ** d


def common_event_bound(params: BlockModelParams, t: int, k: int) -> tuple[float, str]:
    """Lower bound ``min{1/4, t * growth}`` on the hit probability, and the branch taken."""
    raw = t * _growth(params, k)
    return (0.25, "cap") if raw >= 0.25 else (raw, "growth")


def hit_count_bound(params: BlockModelParams, t: int, k: int, j: int) -> tuple[float, str]:
    """Lower bound ``min{1/16, t/4 * growth} * |W_kj|`` on hit vertices in a sub-block."""
    size = params.subblock_sizes[k - 1][j - 1]
    raw = t / 4 * _growth(params, k)
    return (size / 16, "cap") if raw >= 1 / 16 else (raw * size, "growth")


@dataclass
class CommonEventEstimate:
    p_hat: float
    ci: tuple[float, float]
    successes: int
    trials: int
    target: int
    bound: float
    bound_branch: str

    @property
    def bound_applicable(self) -> bool:
        return self.bound <= 1.0

    @property
    def bound_consistent(self) -> bool:
        """The lower bound is not contradicted by the upper confidence edge."""
        return self.bound <= self.ci[1]


def estimate_common_event(
    params: BlockModelParams,
    b: BackMultiset,
    k: int,
    trials: int = 10_000,
    seed: int = 0,
) -> CommonEventEstimate:
    """Monte Carlo probability that a fresh target in block ``k`` sees some set of ``b`` whole.

    The target is the lowest vertex of ``W_k`` outside the union of ``b``;
    each trial resamples the edges from it to that union.
    """
    lo, hi = params.block_range(k)
    union = sorted(b.union())
    taken = {u for u in union if lo <= u < hi}
    target = next((u for u in range(lo, hi) if u not in taken), None)
    if target is None:
        raise PreconditionError("no valid target: the union covers the whole block")
    col = {u: c for c, u in enumerate(union)}
    probs = np.array([params.p(params.block_of(u), k) for u in union])
    distinct = [np.array(sorted(col[u] for u in s), dtype=np.int64) for s in set(b.sets)]

    rng = np.random.default_rng(seed)
    hits = 0
    for start in range(0, trials, _MC_CHUNK):
        size = min(_MC_CHUNK, trials - start)
        if not distinct:
            continue
        edges = rng.random((size, len(union))) < probs
        event = np.zeros(size, dtype=bool)
        for cols in distinct:
            event |= edges[:, cols].all(axis=1)
        hits += int(np.count_nonzero(event))
    bound, branch = common_event_bound(params, b.t, k)
    return CommonEventEstimate(
        hits / trials, wilson_interval(hits, trials), hits, trials, target, bound, branch
    )


@dataclass
class PseudoRandomDiagnostic:
    hit_count: int
    bound: float
    branch: str
    size: int

    @property
    def satisfied(self) -> bool:
        return self.hit_count >= self.bound


def pseudo_random_diagnostic(
    host: HostGraph, b: BackMultiset, k: int, j: int
) -> PseudoRandomDiagnostic:
    """Count vertices of sub-block (k, j) lying in the common neighbourhood of some set of ``b``."""
    params = host.params
    lo, hi = params.subblock_range(k, j)
    hit = np.zeros(hi - lo, dtype=bool)
    for s in set(b.sets):
        common = np.ones(hi - lo, dtype=bool)
        for u in s:
            common &= host.adj[u, lo:hi]
        hit |= common
    bound, branch = hit_count_bound(params, b.t, k, j)
    return PseudoRandomDiagnostic(int(np.count_nonzero(hit)), bound, branch, hi - lo)


def bounds_table(n_values, d: int) -> list[dict]:
    """Rows comparing the lower bound, the budget and the model bound at each ``n``."""
    rows = []
    for n in n_values:
        lb = lower_bound_edges(n, d)
        bud = universality_budget(n, d)
        mb = model_edge_bound(n, d)
        rows.append(
            {
                "n": n,
                "d": d,
                "lower_bound": lb,
                "budget": bud,
                "model_edge_bound": mb,
                "budget_over_lower": bud / lb,
                "model_over_lower": mb / lb,
            }
        )
    return rows


def gap_slope(rows: list[dict]) -> float:
    """Least-squares slope of ln(budget/lower_bound) against ln n."""
    x = np.log([r["n"] for r in rows])
    y = np.log([r["budget_over_lower"] for r in rows])
    return float(np.polyfit(x, y, 1)[0])
