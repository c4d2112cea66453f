import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degenuniv.blockmodel import (
    BlockModelParams,
    HostGraph,
    audit_edges,
    derive_params,
    level_count,
    default_prob_boost,
    sample_host,
    split_block,
)
from degenuniv.errors import PreconditionError, SizeOverflowError

from .oracles import level_count_float


def test_levels_million_d2():
    # float oracle: N=2 gives 1000 > 81, N=3 gives ~31.6 <= 81
    assert level_count_float(1e6, 2) == 3
    assert derive_params(10**6, 2).levels == 3


@pytest.mark.parametrize("n", [16, 81, 82, 2000, 6561, 6562, 10**4, 10**6, 10**9, 10**12])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_levels_minimal(n, d):
    big_n = level_count(n, d)
    assert n ** (d ** (1.0 - big_n)) <= 3.0 ** (d * d) * (1 + 1e-12)
    if big_n > 1:
        assert n ** (d ** (2.0 - big_n)) > 3.0 ** (d * d)


@pytest.mark.parametrize("n, d", [(16, 2), (10**4, 3), (10**6, 2), (123457, 4)])
def test_delta_one_is_n(n, d):
    p = derive_params(n, d)
    assert p.delta[0] == n
    assert p.delta[-1] == 0.0
    assert len(p.delta) == p.levels + 1


def test_p22_is_one_at_million():
    # exponent -1/2 + 1/4 + 1/4 = 0, then min with 1
    p = derive_params(10**6, 2)
    assert p.p(2, 2) == 1.0


def test_first_row_and_column_are_one():
    p = derive_params(10**4, 2, block_constant=1, prob_boost=0)
    assert np.all(p.prob[0, :] == 1) and np.all(p.prob[:, 0] == 1)
    assert np.all(p.prob[1:, 1:] == 0)


def test_probability_formula():
    p = derive_params(10**4, 2, prob_boost=1)
    assert p.p(3, 3) == pytest.approx(10 ** (4 * -0.25))
    assert p.p(2, 3) == pytest.approx(10 ** (4 * -0.125))


def test_block_sizes():
    p = derive_params(2000, 2, block_constant=4)
    assert p.block_sizes == (math.ceil(4 * 2000**0.5), math.ceil(4 * 2000**0.75))
    assert p.block_sizes == (179, 1197)


@given(st.integers(1, 10**6), st.integers(2, 40))
def test_split_block(size, parts):
    row = split_block(size, parts)
    assert len(row) == parts and sum(row) == size
    assert row[0] == -(-size // 2)
    assert max(row[1:]) - min(row[1:]) <= 1
    assert list(row[1:]) == sorted(row[1:], reverse=True)
    if size >= 2 * parts * parts:
        assert min(row) * 2 * parts >= size


@pytest.mark.parametrize("n, d", [(10**5, 2), (10**6, 2), (10**6, 3), (10**8, 4)])
def test_size_bounds(n, d):
    p = derive_params(n, d)
    checks = p.size_checks()
    assert all(checks.values()), checks
    w_n = p.block_sizes[-1]
    assert 100 * n <= w_n <= 100 / 3 * 3**d * n
    assert p.total_vertices <= 200 * 3**d * n
    for w, row in zip(p.block_sizes, p.subblock_sizes):
        assert sum(row) == w
        assert min(row) >= w / (2 * p.subblock_count)


def test_subblock_count_default():
    assert derive_params(2000, 2).subblock_count == 7
    assert derive_params(16, 2).subblock_count == 2


def test_errors():
    with pytest.raises(PreconditionError, match="n too small"):
        derive_params(8, 2)
    with pytest.raises(PreconditionError, match="invalid override"):
        derive_params(100, 2, block_constant=0)
    with pytest.raises(PreconditionError, match="invalid override"):
        derive_params(100, 2, prob_boost=-1)
    with pytest.raises(PreconditionError, match="invalid override"):
        derive_params(100, 2, subblock_count=1)


def test_d_one_single_level():
    p = derive_params(100, 1)
    assert p.levels == 1 and p.p(1, 1) == 1.0


def test_labels_and_layout():
    p = derive_params(2000, 2, block_constant=4)
    lo, hi = p.subblock_range(2, 3)
    assert p.label(lo) == (2, 3) and p.label(hi - 1) == (2, 3)
    assert p.label(0) == (1, 1)
    assert p.block_of(p.block_sizes[0]) == 2


def test_params_json_round_trip():
    import json

    p = derive_params(2000, 2, block_constant=4, prob_boost=0.05)
    q = BlockModelParams.from_dict(json.loads(p.to_json()))
    assert q.to_json() == p.to_json()


@pytest.fixture(scope="module")
def mixed_params():
    return derive_params(2000, 2, block_constant=4, prob_boost=0.05)


def test_sample_labels(mixed_params):
    host = sample_host(mixed_params, 3)
    for k in range(1, mixed_params.levels + 1):
        assert np.count_nonzero(host.block_of == k) == mixed_params.block_sizes[k - 1]
        for j in range(1, mixed_params.subblock_count + 1):
            cnt = np.count_nonzero((host.block_of == k) & (host.subblock_of == j))
            assert cnt == mixed_params.subblock_sizes[k - 1][j - 1]
    adj = host.adj
    assert not adj.diagonal().any()
    assert (adj == adj.T).all()


def test_first_block_fully_joined(mixed_params):
    host = sample_host(mixed_params, 0)
    a0, a1 = mixed_params.block_range(1)
    sub = host.adj[a0:a1]
    assert sub[:, a1:].all()
    assert np.triu(sub[:, a0:a1], 1).sum() == (a1 - a0) * (a1 - a0 - 1) // 2


def test_zero_boost_no_edges_between_deep_blocks():
    p = derive_params(10**4, 2, block_constant=1, prob_boost=0)
    host = sample_host(p, 1)
    b0, _ = p.block_range(2)
    assert not host.adj[b0:, b0:].any()
    audit = audit_edges(host)
    deep = [a for a in audit.pairs if a.i >= 2]
    assert all(a.observed == 0 and a.expected == 0 for a in deep)


def test_determinism(mixed_params):
    assert sample_host(mixed_params, 11).to_edge_list() == sample_host(mixed_params, 11).to_edge_list()
    assert sample_host(mixed_params, 11).to_edge_list() != sample_host(mixed_params, 12).to_edge_list()


def test_size_overflow():
    with pytest.raises(SizeOverflowError, match="size overflow"):
        sample_host(derive_params(10**6, 2), 0)


def test_audit_full_pair_exact(mixed_params):
    host = sample_host(mixed_params, 5)
    audit = audit_edges(host)
    a12 = next(a for a in audit.pairs if (a.i, a.k) == (1, 2))
    assert a12.observed == 179 * 1197 and a12.z == 0


def test_host_text_round_trip(mixed_params):
    host = sample_host(mixed_params, 2)
    back = HostGraph.from_texts(host.to_edge_list(), host.labels_text(), mixed_params)
    assert (back.adj == host.adj).all()


def test_edge_frequency_within_binomial_bounds():
    # fixed labelled pair inside W_2, p = 0.05: frequency over many seeds
    p = derive_params(2000, 2, block_constant=4, prob_boost=0.05)
    lo, _ = p.block_range(2)
    u, v = lo + 3, lo + 500
    seeds = 400
    hits = sum(sample_host(p, s).has_edge(u, v) for s in range(seeds))
    mean, sd = seeds * 0.05, math.sqrt(seeds * 0.05 * 0.95)
    assert abs(hits - mean) <= 4 * sd


def test_prob_boost_default():
    n = 10**4
    assert derive_params(n, 2).prob_boost == pytest.approx(math.log(n) * math.log(math.log(n)) ** 3)
    assert default_prob_boost(n, 3) == pytest.approx(math.log(n) ** (2 / 3) * math.log(math.log(n)) ** 3)
