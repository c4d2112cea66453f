"""Random block model host graphs: parameters, sampling and edge audits."""

from __future__ import annotations

import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Optional

import numpy as np

from .errors import EdgeListError, PreconditionError, SizeOverflowError
from .graph import Graph

log = logging.getLogger(__name__)

DEFAULT_MAX_VERTICES = 16_000
_ROW_CHUNK = 256


def default_block_constant(d: int) -> float:
    return 100.0 * 3.0**d


def default_prob_boost(n: int, d: int) -> float:
    ln = math.log(n)
    return ln ** (2.0 / d) * math.log(ln) ** 3


def default_subblock_count(n: int) -> int:
    return max(2, math.floor(math.log(n)))


def level_count(n: int, d: int) -> int:
    """Smallest N with ``n ** (d ** (1 - N)) <= 3 ** (d**2)``.

    Evaluated exactly as ``n <= 3 ** (d ** (N + 1))``. For ``d == 1`` no
    such N exists and a single level is used.
    """
    if d == 1:
        return 1
    levels = 1
    while n > 3 ** (d ** (levels + 1)):
        levels += 1
    return levels


def delta_le(value: int, n: int, d: int, k: int) -> bool:
    """Exact test of ``value <= n ** (d ** (1 - k))`` for integer ``value >= 0``."""
    return value ** (d ** (k - 1)) <= n


def split_block(size: int, parts: int) -> tuple[int, ...]:
    """First part gets ceil(size/2); the rest is spread evenly, earlier parts first."""
    first = -(-size // 2)
    rest = size - first
    q, r = divmod(rest, parts - 1)
    return (first,) + tuple(q + 1 if j < r else q for j in range(parts - 1))


@dataclass(frozen=True, eq=False)
class BlockModelParams:
    """Derived constants of the random block model.

    Blocks ``k`` and sub-blocks ``j`` are numbered from 1. ``delta`` holds
    ``N + 1`` thresholds, the last one being 0. Vertices are laid out
    block by block (W_1 first), sub-blocks contiguous inside each block.
    """

    n: int
    d: int
    levels: int
    delta: tuple[float, ...]
    prob: np.ndarray
    block_sizes: tuple[int, ...]
    subblock_count: int
    subblock_sizes: tuple[tuple[int, ...], ...]
    block_constant: float
    prob_boost: float
    overrides: dict[str, float] = field(default_factory=dict)

    @property
    def uses_defaults(self) -> bool:
        return not self.overrides

    @property
    def total_vertices(self) -> int:
        return sum(self.block_sizes)

    @cached_property
    def block_offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.block_sizes)]).astype(np.int64)

    @cached_property
    def subblock_offsets(self) -> np.ndarray:
        """Flat array of sub-block start offsets, length ``N*J + 1``."""
        sizes = [s for row in self.subblock_sizes for s in row]
        return np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)

    def p(self, i: int, k: int) -> float:
        return float(self.prob[i - 1, k - 1])

    def block_range(self, k: int) -> tuple[int, int]:
        off = self.block_offsets
        return int(off[k - 1]), int(off[k])

    def subblock_range(self, k: int, j: int) -> tuple[int, int]:
        idx = (k - 1) * self.subblock_count + (j - 1)
        off = self.subblock_offsets
        return int(off[idx]), int(off[idx + 1])

    def label(self, v: int) -> tuple[int, int]:
        """(block, sub-block) of host vertex ``v``."""
        if not 0 <= v < self.total_vertices:
            raise PreconditionError(f"host vertex {v} out of range")
        idx = int(np.searchsorted(self.subblock_offsets, v, side="right")) - 1
        k, j = divmod(idx, self.subblock_count)
        return k + 1, j + 1

    def block_of(self, v: int) -> int:
        return int(np.searchsorted(self.block_offsets, v, side="right"))

    def band_fits(self, deg: int, k: int) -> bool:
        """Whether ``Delta_{k+1} < deg <= Delta_k`` (exactly, in integers)."""
        upper = delta_le(deg, self.n, self.d, k)
        lower = k == self.levels or not delta_le(deg, self.n, self.d, k + 1)
        return upper and lower

    def size_checks(self) -> dict[str, bool]:
        """Two-sided bounds on N, Delta_N and |W_N| (meaningful for d >= 2, large n)."""
        n, d, big_n = self.n, self.d, self.levels
        lnln = math.log(math.log(n))
        out = {
            "levels_lower": d >= 2 and lnln / (2 * math.log(d)) <= big_n,
            "levels_upper": big_n <= 2 * lnln,
            "delta_n_lower": 3.0**d <= self.delta[big_n - 1],
            "delta_n_upper": self.delta[big_n - 1] <= 3.0 ** (d * d),
        }
        # With the default constant these read 100n <= |W_N| <= (100/3) 3^d n.
        w_n = self.block_sizes[-1]
        out["w_n_lower"] = self.block_constant / 3.0**d * n <= w_n
        out["w_n_upper"] = w_n <= self.block_constant / 3.0 * n
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "d": self.d,
            "levels": self.levels,
            "delta": list(self.delta),
            "prob": self.prob.tolist(),
            "block_sizes": list(self.block_sizes),
            "subblock_count": self.subblock_count,
            "subblock_sizes": [list(r) for r in self.subblock_sizes],
            "block_constant": self.block_constant,
            "prob_boost": self.prob_boost,
            "overrides": dict(self.overrides),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> BlockModelParams:
        """Rebuild from a serialised record; derived values are recomputed and checked."""
        params = derive_params(data["n"], data["d"], **data.get("overrides", {}))
        if list(params.block_sizes) != list(data["block_sizes"]):
            raise PreconditionError("params record is inconsistent with its n, d and overrides")
        return params


def derive_params(
    n: int,
    d: int,
    *,
    block_constant: Optional[float] = None,
    prob_boost: Optional[float] = None,
    subblock_count: Optional[int] = None,
) -> BlockModelParams:
    """Compute every constant of the random block model for guest size ``n``.

    Unset overrides take the values from the construction:
    ``100 * 3**d`` for the block constant, ``ln(n)**(2/d) * ln(ln(n))**3``
    for the probability boost and ``max(2, floor(ln n))`` sub-blocks.
    """
    if not isinstance(n, (int, np.integer)) or not isinstance(d, (int, np.integer)):
        raise PreconditionError("n and d must be integers")
    n, d = int(n), int(d)
    if n < 16:
        raise PreconditionError(f"n too small: {n} < 16")
    if d < 1:
        raise PreconditionError(f"d must be >= 1, got {d}")

    overrides: dict[str, float] = {}
    if block_constant is not None:
        if not block_constant > 0:
            raise PreconditionError("invalid override: block_constant must be positive")
        overrides["block_constant"] = float(block_constant)
    if prob_boost is not None:
        if not prob_boost >= 0:
            raise PreconditionError("invalid override: prob_boost must be non-negative")
        overrides["prob_boost"] = float(prob_boost)
    if subblock_count is not None:
        if int(subblock_count) != subblock_count or subblock_count < 2:
            raise PreconditionError("invalid override: subblock_count must be an integer >= 2")
        overrides["subblock_count"] = int(subblock_count)

    bc = overrides.get("block_constant", default_block_constant(d))
    boost = overrides.get("prob_boost", default_prob_boost(n, d))
    big_j = int(overrides.get("subblock_count", default_subblock_count(n)))
    big_n = level_count(n, d)

    inv = [d ** -float(i) for i in range(0, big_n + 1)]  # inv[i] = d**-i
    delta = tuple(float(n) ** inv[i - 1] for i in range(1, big_n + 1)) + (0.0,)

    prob = np.empty((big_n, big_n))
    for i in range(1, big_n + 1):
        for k in range(1, big_n + 1):
            if i == 1 or k == 1:
                prob[i - 1, k - 1] = 1.0
                continue
            expo = -inv[1] + inv[i] + inv[k]
            prob[i - 1, k - 1] = min(max(n**expo * boost, 0.0), 1.0)
    prob.setflags(write=False)

    block_sizes = tuple(math.ceil(bc * n ** (1.0 - inv[k])) for k in range(1, big_n + 1))
    sub = tuple(split_block(w, big_j) for w in block_sizes)
    for w, row in zip(block_sizes, sub):
        if min(row) * 2 * big_j < w:
            warnings.warn(
                f"block of size {w} is too small for {big_j} sub-blocks of size >= |W|/(2J)",
                stacklevel=2,
            )
            break
    if d >= 2 and n < 10_000:
        log.debug("n=%d below 1e4: block-model size bounds are not expected to hold", n)

    return BlockModelParams(
        n=n,
        d=d,
        levels=big_n,
        delta=delta,
        prob=prob,
        block_sizes=block_sizes,
        subblock_count=big_j,
        subblock_sizes=sub,
        block_constant=float(bc),
        prob_boost=float(boost),
        overrides=overrides,
    )


def pair_expectation(params: BlockModelParams, i: int, k: int) -> float:
    """Expected number of edges between blocks ``i`` and ``k`` (``i == k``: inside)."""
    wi, wk = params.block_sizes[i - 1], params.block_sizes[k - 1]
    pairs = wi * (wi - 1) / 2 if i == k else wi * wk
    return params.p(i, k) * pairs


def pair_count(params: BlockModelParams, i: int, k: int) -> int:
    wi, wk = params.block_sizes[i - 1], params.block_sizes[k - 1]
    return wi * (wi - 1) // 2 if i == k else wi * wk


class HostGraph:
    """A sampled host graph with its block and sub-block labels.

    Adjacency is a dense boolean matrix; host sizes are capped so that it
    fits in memory.
    """

    def __init__(self, adj: np.ndarray, params: BlockModelParams, seed: Optional[int]):
        if adj.shape != (params.total_vertices, params.total_vertices):
            raise PreconditionError("adjacency shape does not match params")
        adj.setflags(write=False)
        self.adj = adj
        self.params = params
        self.seed = seed
        labels = np.repeat(
            np.arange(params.levels * params.subblock_count),
            [s for row in params.subblock_sizes for s in row],
        )
        self.block_of = labels // params.subblock_count + 1
        self.subblock_of = labels % params.subblock_count + 1

    @property
    def vertex_count(self) -> int:
        return self.adj.shape[0]

    @cached_property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.adj)) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def edges(self) -> np.ndarray:
        u, v = np.nonzero(np.triu(self.adj, 1))
        return np.column_stack([u, v])

    @cached_property
    def graph(self) -> Graph:
        return Graph(self.vertex_count, map(tuple, self.edges().tolist()))

    def to_edge_list(self) -> str:
        e = self.edges()
        lines = [f"{self.vertex_count} {len(e)}"]
        lines.extend(f"{u} {v}" for u, v in e.tolist())
        return "\n".join(lines) + "\n"

    def labels_text(self) -> str:
        rows = zip(range(self.vertex_count), self.block_of.tolist(), self.subblock_of.tolist())
        return "".join(f"{v} {k} {j}\n" for v, k, j in rows)

    @classmethod
    def from_texts(
        cls, edge_text: str, labels_text: str, params: BlockModelParams, seed: Optional[int] = None
    ) -> HostGraph:
        """Rebuild a host from its edge list and label file."""
        lines = [ln.split() for ln in edge_text.splitlines() if ln.strip()]
        if not lines or len(lines[0]) != 2:
            raise EdgeListError("missing header")
        nv, m = int(lines[0][0]), int(lines[0][1])
        if nv != params.total_vertices or len(lines) - 1 != m:
            raise EdgeListError("host edge list does not match params")
        adj = np.zeros((nv, nv), dtype=bool)
        if m:
            e = np.array(lines[1:], dtype=np.int64)
            if e.min() < 0 or e.max() >= nv:
                raise EdgeListError("index out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise EdgeListError("self-loop")
            adj[e[:, 0], e[:, 1]] = True
            adj[e[:, 1], e[:, 0]] = True
            if np.count_nonzero(adj) != 2 * m:
                raise EdgeListError("duplicate edge")
        host = cls(adj, params, seed)
        expected = host.labels_text()
        got = "".join(" ".join(ln.split()) + "\n" for ln in labels_text.splitlines() if ln.strip())
        if got != expected:
            raise EdgeListError("label file does not match params layout")
        return host


def sample_host(
    params: BlockModelParams, seed: int, *, max_vertices: int = DEFAULT_MAX_VERTICES
) -> HostGraph:
    """Sample a host graph: each pair in blocks (i, k) is an edge with prob ``p[i, k]``.

    Deterministic given ``seed``.
    """
    nv = params.total_vertices
    if nv > max_vertices:
        raise SizeOverflowError(f"size overflow: host would have {nv} vertices (cap {max_vertices})")
    rng = np.random.default_rng(seed)
    adj = np.zeros((nv, nv), dtype=bool)
    big_n = params.levels
    for i in range(1, big_n + 1):
        a0, a1 = params.block_range(i)
        for k in range(i, big_n + 1):
            b0, b1 = params.block_range(k)
            p = params.p(i, k)
            if p <= 0.0:
                continue
            block = adj[a0:a1, b0:b1]
            if p >= 1.0:
                block[...] = True
            else:
                for r in range(0, a1 - a0, _ROW_CHUNK):
                    r1 = min(r + _ROW_CHUNK, a1 - a0)
                    block[r:r1] = rng.random((r1 - r, b1 - b0)) < p
            if i == k:
                upper = np.triu(block, 1)
                adj[a0:a1, b0:b1] = upper | upper.T
            else:
                adj[b0:b1, a0:a1] = block.T
    return HostGraph(adj, params, seed)


@dataclass(frozen=True)
class PairAudit:
    i: int
    k: int
    observed: int
    expected: float
    z: float


@dataclass
class EdgeAudit:
    pairs: list[PairAudit]
    threshold: float
    total_observed: int
    total_expected: float

    @property
    def max_abs_z(self) -> float:
        return max((abs(p.z) for p in self.pairs), default=0.0)

    @property
    def flagged(self) -> bool:
        return self.max_abs_z > self.threshold

    def to_csv(self) -> str:
        rows = ["i,k,observed,expected,z"]
        rows += [f"{p.i},{p.k},{p.observed},{p.expected:.6f},{p.z:.6f}" for p in self.pairs]
        return "\n".join(rows) + "\n"


def audit_edges(host: HostGraph, *, threshold: float = 5.0) -> EdgeAudit:
    """Compare per block-pair edge counts with their binomial expectation."""
    params = host.params
    out = []
    for i in range(1, params.levels + 1):
        a0, a1 = params.block_range(i)
        for k in range(i, params.levels + 1):
            b0, b1 = params.block_range(k)
            block = host.adj[a0:a1, b0:b1]
            obs = int(np.count_nonzero(block))
            if i == k:
                obs //= 2
            pairs = pair_count(params, i, k)
            p = params.p(i, k)
            exp = p * pairs
            var = pairs * p * (1.0 - p)
            if var > 0:
                z = (obs - exp) / math.sqrt(var)
            else:
                z = 0.0 if obs == exp else math.inf
            out.append(PairAudit(i, k, obs, exp, z))
    return EdgeAudit(
        out, threshold, sum(p.observed for p in out), sum(p.expected for p in out)
    )
