import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from degenuniv.analysis import (
    bounds_report,
    bounds_table,
    chernoff_tail,
    common_event_bound,
    estimate_common_event,
    expected_edges,
    gap_slope,
    hit_count_bound,
    lower_bound_edges,
    model_edge_bound,
    pseudo_random_diagnostic,
    universality_budget,
    wilson_interval,
)
from degenuniv.blockmodel import audit_edges, derive_params, sample_host
from degenuniv.embedder import BackMultiset, check_well_behaved
from degenuniv.errors import PreconditionError


def test_lower_bound_values():
    assert lower_bound_edges(10**6, 2) == pytest.approx(5e5)
    assert lower_bound_edges(1, 3) == pytest.approx(1 / 3000)


@given(st.integers(1, 10**9), st.integers(1, 6))
def test_lower_bound_monotone(n, d):
    assert lower_bound_edges(n + 1, d) > lower_bound_edges(n, d)


def test_budget_value_at_16():
    # 80000 * 16 * ln(16)^2 * ln(ln 16)^5, evaluated directly
    assert universality_budget(16, 1) == pytest.approx(10852165.125090627, rel=1e-12)
    with pytest.raises(PreconditionError, match="n too small"):
        universality_budget(15, 2)


@pytest.mark.parametrize("n", [1e4, 1e6, 1e8, 1e12])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_budget_over_lower_is_polylog(n, d):
    ln = math.log(n)
    ratio = universality_budget(n, d) / lower_bound_edges(n, d)
    assert ratio == pytest.approx(8e7 * d * ln ** (2 / d) * math.log(ln) ** 5, rel=1e-9)


@given(st.integers(16, 10**9), st.integers(1, 5))
def test_budget_increasing(n, d):
    assert universality_budget(n + 1, d) > universality_budget(n, d)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_lower_below_budget_sweep(d):
    for n in np.logspace(4, 8, 50):
        assert lower_bound_edges(n, d) < universality_budget(n, d)


def test_chernoff():
    assert chernoff_tail(0, 0.5) == 2.0
    assert chernoff_tail(300, 0.5) == pytest.approx(2 * math.exp(-25))
    assert chernoff_tail(10, 1.0) > chernoff_tail(11, 1.0)
    for bad in (0, 1.5, -1):
        with pytest.raises(PreconditionError):
            chernoff_tail(1, bad)


def test_wilson_against_closed_form():
    z2 = 1.959963984540054**2
    lo, hi = wilson_interval(0, 10)
    assert lo == pytest.approx(0, abs=1e-12) and hi == pytest.approx(z2 / (10 + z2))
    lo, hi = wilson_interval(10, 10)
    assert hi == pytest.approx(1) and lo == pytest.approx(10 / (10 + z2))
    lo, hi = wilson_interval(50, 100)
    assert lo + hi == pytest.approx(1.0)


def test_expected_edges_matches_audit():
    p = derive_params(10**4, 2, block_constant=1, prob_boost=1)
    audit = audit_edges(sample_host(p, 0))
    assert expected_edges(p) == sum(a.expected for a in audit.pairs)


def test_bounds_report():
    p = derive_params(2000, 2, block_constant=4)
    host = sample_host(p, 1)
    rep = bounds_report(p, host)
    assert rep.observed_edges == host.edge_count
    assert rep.expected_edges == host.edge_count  # every p is 1 here
    assert rep.lower_bound < rep.budget


def test_model_bound_covers_default_expectation():
    for n in (10**4, 10**6, 10**8):
        p = derive_params(n, 2)
        assert expected_edges(p) <= model_edge_bound(n, 2)


# Monte Carlo estimates of common-neighbour events


@pytest.fixture(scope="module")
def deep_params():
    """Default constants at n = 10^12: four levels, p_{3,4} ~ 0.18."""
    return derive_params(10**12, 2)


def test_common_event_first_block_certain(deep_params):
    b = BackMultiset([frozenset({0, 1})])
    est = estimate_common_event(deep_params, b, 3, trials=2000, seed=1)
    assert est.p_hat == 1.0


def test_common_event_empty_never(deep_params):
    est = estimate_common_event(deep_params, BackMultiset(), 3, trials=2000, seed=1)
    assert est.p_hat == 0.0 and est.successes == 0


def test_common_event_singleton_matches_product(deep_params):
    lo, _ = deep_params.block_range(3)
    b = BackMultiset([frozenset({lo, lo + 1})])
    assert check_well_behaved(b, deep_params) is None
    est = estimate_common_event(deep_params, b, 4, trials=10_000, seed=3)
    analytic = deep_params.p(3, 4) ** 2
    assert 0 < analytic < 1
    assert est.ci[0] <= analytic <= est.ci[1]
    assert est.bound == pytest.approx(2.659453708453401e-07, rel=1e-9)
    assert est.bound_branch == "growth" and est.bound_consistent


def test_common_event_target_is_outside_union(deep_params):
    lo, _ = deep_params.block_range(4)
    b = BackMultiset([frozenset({lo, lo + 1})])
    est = estimate_common_event(deep_params, b, 4, trials=100, seed=0)
    assert est.target == lo + 2


def test_common_event_no_target():
    p = derive_params(16, 2, block_constant=1)
    lo, hi = p.block_range(1)
    b = BackMultiset([frozenset({v}) for v in range(lo, hi)])
    with pytest.raises(PreconditionError, match="no valid target"):
        estimate_common_event(p, b, 1, trials=10)


def test_common_event_deterministic(deep_params):
    lo, _ = deep_params.block_range(3)
    b = BackMultiset([frozenset({lo, lo + 1}), frozenset({lo + 2})])
    a = estimate_common_event(deep_params, b, 4, trials=5000, seed=8)
    c = estimate_common_event(deep_params, b, 4, trials=5000, seed=8)
    assert a == c


def test_bound_branches(deep_params):
    assert common_event_bound(deep_params, 1, 1) == (0.25, "cap")
    val, branch = hit_count_bound(deep_params, 0, 2, 2)
    assert val == 0 and branch == "growth"


@pytest.fixture(scope="module")
def scaled_params():
    """n = 10^4, d = 2, unit block constant and boost: p_{2,3} ~ 0.32, p_{3,3} = 0.1."""
    return derive_params(10**4, 2, block_constant=1, prob_boost=1)


def test_diagnostic_first_block_all_hit(scaled_params):
    host = sample_host(scaled_params, 0)
    lo2 = scaled_params.block_range(2)[0]
    b = BackMultiset([frozenset({lo2, lo2 + 1})])
    diag = pseudo_random_diagnostic(host, b, 1, 2)
    assert diag.hit_count == diag.size and diag.satisfied


def test_diagnostic_empty(scaled_params):
    host = sample_host(scaled_params, 0)
    diag = pseudo_random_diagnostic(host, BackMultiset(), 3, 2)
    assert diag.bound == 0 and diag.hit_count == 0 and diag.satisfied


def test_diagnostic_brute_count(scaled_params):
    host = sample_host(scaled_params, 4)
    lo2 = scaled_params.block_range(2)[0]
    sets = [frozenset({lo2 + 3, lo2 + 70}), frozenset({lo2 + 9})]
    diag = pseudo_random_diagnostic(host, BackMultiset(sets), 3, 2)
    lo, hi = scaled_params.subblock_range(3, 2)
    brute = sum(
        any(all(host.has_edge(u, v) for v in s) for s in sets) for u in range(lo, hi)
    )
    assert diag.hit_count == brute


def test_diagnostic_random_well_behaved(scaled_params):
    lo2, hi2 = scaled_params.block_range(2)
    satisfied = 0
    for seed in range(30):
        rng = np.random.default_rng(seed + 1000)
        sets = [frozenset(rng.choice(np.arange(lo2, hi2), 2, replace=False).tolist()) for _ in range(3)]
        b = BackMultiset(sets)
        assert check_well_behaved(b, scaled_params) is None
        host = sample_host(scaled_params, seed)
        satisfied += pseudo_random_diagnostic(host, b, 3, 2).satisfied
    assert satisfied >= 27


def test_bounds_table_and_slope():
    rows = bounds_table([1e4, 1e5], 2)
    assert rows[0]["lower_bound"] == lower_bound_edges(1e4, 2)
    assert rows[1]["budget"] == universality_budget(1e5, 2)
    assert gap_slope(rows) > 0
