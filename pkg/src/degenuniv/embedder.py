"""Greedy sub-block embedding of degenerate guests into a block-model host.

Guest vertices are placed one at a time in degeneracy order. A vertex of
degree ``deg`` goes to the block ``k`` whose band ``(Delta_{k+1},
Delta_k]`` contains ``deg``, and inside that block to the first sub-block
holding a free common neighbour of its already embedded back-neighbours.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal, Optional, Union

import numpy as np

from .blockmodel import BlockModelParams, HostGraph, delta_le
from .errors import EdgeListError, PreconditionError
from .graph import DegeneracyResult, Graph, degeneracy_order


def assign_band(deg: int, params: BlockModelParams) -> int:
    """Block index ``k`` with ``Delta_{k+1} < deg <= Delta_k``; isolated vertices get ``N``."""
    if deg < 0 or deg > params.n - 1:
        raise PreconditionError(f"degree {deg} outside 0..n-1")
    if deg == 0:
        return params.levels
    # Delta_k is decreasing in k, so the band is the last k with deg <= Delta_k.
    k = 1
    while k < params.levels and delta_le(deg, params.n, params.d, k + 1):
        k += 1
    return k


def common_candidates(
    host: HostGraph, images: Sequence[int], k: int, j: int, used: np.ndarray | set[int]
) -> list[int]:
    """Unoccupied vertices of sub-block (k, j) adjacent to every vertex in ``images``.

    ``used`` is either a boolean occupancy mask over host vertices or a set.
    """
    lo, hi = host.params.subblock_range(k, j)
    return (lo + _candidate_mask(host, images, lo, hi, _free_mask(host, used))).tolist()


def _free_mask(host: HostGraph, used: np.ndarray | set[int]) -> np.ndarray:
    if isinstance(used, np.ndarray):
        return ~used
    free = np.ones(host.vertex_count, dtype=bool)
    if used:
        free[list(used)] = False
    return free


def _candidate_mask(
    host: HostGraph, images: Sequence[int], lo: int, hi: int, free: np.ndarray
) -> np.ndarray:
    mask = free[lo:hi].copy()
    for u in images:
        mask &= host.adj[u, lo:hi]
    return np.flatnonzero(mask)


@dataclass
class PartialEmbedding:
    """Injective map from a prefix of the guest order into the host."""

    map: list[Optional[int]]
    used: np.ndarray
    occupancy: np.ndarray  # (N, J) counts, index [k-1, j-1]

    @classmethod
    def empty(cls, guest_n: int, params: BlockModelParams) -> PartialEmbedding:
        return cls(
            [None] * guest_n,
            np.zeros(params.total_vertices, dtype=bool),
            np.zeros((params.levels, params.subblock_count), dtype=np.int64),
        )

    def assign(self, x: int, v: int, k: int, j: int) -> None:
        if self.map[x] is not None or self.used[v]:
            raise PreconditionError("assignment would break injectivity")
        self.map[x] = v
        self.used[v] = True
        self.occupancy[k - 1, j - 1] += 1

    def recount_occupancy(self, params: BlockModelParams) -> np.ndarray:
        occ = np.zeros_like(self.occupancy)
        for v in self.map:
            if v is not None:
                k, j = params.label(v)
                occ[k - 1, j - 1] += 1
        return occ


@dataclass(frozen=True)
class TraceStep:
    i: int  # 1-based position in the guest order
    guest: int
    k: int
    j: int
    host: int
    candidates_remaining: int

    def line(self) -> str:
        return f"{self.i} {self.guest} {self.k} {self.j} {self.host} {self.candidates_remaining}"


@dataclass(frozen=True)
class FailureReport:
    step: int
    guest: int
    band: int
    back_images: tuple[int, ...]
    occupancy: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "guest": self.guest,
            "band": self.band,
            "back_images": list(self.back_images),
            "occupancy": [list(r) for r in self.occupancy],
        }


@dataclass
class EmbedResult:
    partial: PartialEmbedding
    trace: list[TraceStep]
    failure: Optional[FailureReport] = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    @property
    def embedding(self) -> list[Optional[int]]:
        return self.partial.map

    @property
    def occupancy(self) -> np.ndarray:
        return self.partial.occupancy


@dataclass(frozen=True)
class EmbedOptions:
    choice: Literal["lowest", "random"] = "lowest"
    seed: Optional[int] = None


def back_neighbours(h: Graph, order: DegeneracyResult) -> list[list[int]]:
    """For each guest vertex, its neighbours earlier in ``order`` (sorted by position)."""
    pos = order.positions()
    out: list[list[int]] = [[] for _ in range(h.vertex_count)]
    for x in range(h.vertex_count):
        out[x] = sorted((y for y in h.neighbors(x) if pos[y] < pos[x]), key=pos.__getitem__)
    return out


def embed(
    h: Graph,
    order: DegeneracyResult,
    host: HostGraph,
    options: EmbedOptions = EmbedOptions(),
) -> EmbedResult:
    """Run the greedy sub-block strategy. Never raises on embedding failure.

    Raises PreconditionError for a guest larger than ``n`` or an order
    whose back-degree exceeds the model's ``d`` ("bad order").
    """
    params = host.params
    nh = h.vertex_count
    if nh > params.n:
        raise PreconditionError(f"guest has {nh} vertices, model built for n={params.n}")
    if sorted(order.order) != list(range(nh)):
        raise PreconditionError("bad order: not a permutation of the guest vertices")
    back = back_neighbours(h, order)
    if any(len(b) > params.d for b in back):
        raise PreconditionError(f"bad order: back-degree exceeds d={params.d}")

    rng = np.random.default_rng(options.seed) if options.choice == "random" else None
    pe = PartialEmbedding.empty(nh, params)
    free = np.ones(params.total_vertices, dtype=bool)
    trace: list[TraceStep] = []
    big_j = params.subblock_count
    for i, x in enumerate(order.order, start=1):
        k = assign_band(h.degree(x), params)
        images = [pe.map[y] for y in back[x]]
        for j in range(1, big_j + 1):
            lo, hi = params.subblock_range(k, j)
            cand = _candidate_mask(host, images, lo, hi, free)
            if cand.size:
                pick = 0 if rng is None else int(rng.integers(cand.size))
                v = lo + int(cand[pick])
                pe.assign(x, v, k, j)
                free[v] = False
                trace.append(TraceStep(i, x, k, j, v, int(cand.size) - 1))
                break
        else:
            failure = FailureReport(
                i, x, k, tuple(images), tuple(map(tuple, pe.occupancy.tolist()))
            )
            return EmbedResult(pe, trace, failure)
    return EmbedResult(pe, trace)


def trace_to_text(trace: Sequence[TraceStep]) -> str:
    return "".join(s.line() + "\n" for s in trace)


def trace_from_text(text: str) -> list[TraceStep]:
    out = []
    for ln in text.splitlines():
        if ln.strip():
            parts = ln.split()
            if len(parts) != 6:
                raise EdgeListError(f"malformed trace line {ln!r}")
            out.append(TraceStep(*map(int, parts)))
    return out


def embedding_to_text(m: Sequence[Optional[int]]) -> str:
    return "".join(f"{x} {v}\n" for x, v in enumerate(m) if v is not None)


def embedding_from_text(text: str, guest_n: int) -> list[Optional[int]]:
    m: list[Optional[int]] = [None] * guest_n
    for ln in text.splitlines():
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise EdgeListError(f"malformed embedding line {ln!r}")
        x, v = int(parts[0]), int(parts[1])
        if not 0 <= x < guest_n:
            raise EdgeListError(f"guest index {x} out of range")
        m[x] = v
    return m


# Well-behavedness of collected back-neighbourhood images.


@dataclass
class BackMultiset:
    sets: list[frozenset[int]] = field(default_factory=list)

    @property
    def t(self) -> int:
        return len(self.sets)

    def union(self) -> set[int]:
        return set().union(*self.sets)

    def multiplicities(self) -> Counter:
        return Counter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)


def collect_back_multiset(
    pe: PartialEmbedding,
    h: Graph,
    order: DegeneracyResult,
    k: int,
    j: int,
    params: BlockModelParams,
) -> BackMultiset:
    """Images of the back-neighbourhoods of guests placed in sub-block (k, j)."""
    lo, hi = params.subblock_range(k, j)
    back = back_neighbours(h, order)
    sets = []
    for x in order.order:
        v = pe.map[x]
        if v is not None and lo <= v < hi:
            sets.append(frozenset(pe.map[y] for y in back[x]))
    return BackMultiset(sets)


@dataclass(frozen=True)
class WellBehavedViolation:
    condition: Literal["NB1", "NB2", "NB3"]
    witness: tuple


def check_well_behaved(
    b: BackMultiset, params: BlockModelParams
) -> Optional[WellBehavedViolation]:
    """``None`` if the multiset is well-behaved, otherwise the first broken condition.

    NB1: every set has at most ``d`` elements. NB2: a host vertex in block
    ``k`` lies in at most ``Delta_k`` sets. NB3: the union covers at most
    half of every sub-block.
    """
    for idx, s in enumerate(b.sets):
        if len(s) > params.d:
            return WellBehavedViolation("NB1", (idx, len(s)))
    counts = Counter(u for s in b.sets for u in s)
    for u in sorted(counts):
        k = params.block_of(u)
        if not delta_le(counts[u], params.n, params.d, k):
            return WellBehavedViolation("NB2", (u, k, counts[u]))
    per_sub = Counter(params.label(u) for u in b.union())
    for (k, j), c in sorted(per_sub.items()):
        lo, hi = params.subblock_range(k, j)
        if 2 * c > hi - lo:
            return WellBehavedViolation("NB3", (k, j, c, hi - lo))
    return None


def well_behaved_report(
    result: EmbedResult, h: Graph, order: DegeneracyResult, params: BlockModelParams
) -> dict[tuple[int, int], WellBehavedViolation]:
    """Check every occupied sub-block's back multiset at the end of a run.

    Sets are fixed once their guest is placed and multisets only grow, so
    a multiset well-behaved at the end was well-behaved at every step.
    """
    out = {}
    for k, j in zip(*np.nonzero(result.occupancy)):
        b = collect_back_multiset(result.partial, h, order, int(k) + 1, int(j) + 1, params)
        v = check_well_behaved(b, params)
        if v is not None:
            out[(int(k) + 1, int(j) + 1)] = v
    return out


# Occupancy ledger.


@dataclass(frozen=True, eq=False)
class Ledger:
    values: np.ndarray  # (N, J), index [k-1, j-1]
    params: BlockModelParams

    def __getitem__(self, kj: tuple[int, int]) -> float:
        k, j = kj
        return float(self.values[k - 1, j - 1])

    def bound_violations(self) -> list[tuple[int, int, str]]:
        """Cells breaking ``L + 1 <= |W_kj|/16`` or ``L_{k,J} < ln n``."""
        params = self.params
        out = []
        ln = math.log(params.n)
        for k in range(1, params.levels + 1):
            for j in range(1, params.subblock_count + 1):
                size = params.subblock_sizes[k - 1][j - 1]
                if self[k, j] + 1 > size / 16:
                    out.append((k, j, "fill"))
            if self[k, params.subblock_count] >= ln:
                out.append((k, params.subblock_count, "last"))
        return out


def ledger(params: BlockModelParams) -> Ledger:
    """Per sub-block caps on the number of used host vertices."""
    n, d, big_n, big_j = params.n, params.d, params.levels, params.subblock_count
    shrink = 4 * math.log(n)
    vals = np.empty((big_n, big_j))
    for k in range(1, big_n + 1):
        vals[k - 1, 0] = n if k == big_n else 2 * n ** (1 - d ** -float(k))
        for j in range(1, big_j):
            vals[k - 1, j] = vals[k - 1, j - 1] / shrink
    vals.setflags(write=False)
    return Ledger(vals, params)


@dataclass(frozen=True)
class LedgerBreach:
    i: int
    k: int
    j: int
    occupancy: int
    cap: float


def assert_ledger(trace: Sequence[TraceStep], led: Ledger) -> Optional[LedgerBreach]:
    """Replay ``trace`` and return the first step where a count exceeds its cap."""
    occ = np.zeros_like(led.values, dtype=np.int64)
    for s in trace:
        occ[s.k - 1, s.j - 1] += 1
        c = occ[s.k - 1, s.j - 1]
        if c > led.values[s.k - 1, s.j - 1]:
            return LedgerBreach(s.i, s.k, s.j, int(c), float(led.values[s.k - 1, s.j - 1]))
    return None


def ledger_margins(occupancy: np.ndarray, led: Ledger) -> np.ndarray:
    """Cap minus final count, per (k, j); negative entries are breaches."""
    return led.values - occupancy


def replay_minimality(
    h: Graph, order: DegeneracyResult, host: HostGraph, trace: Sequence[TraceStep]
) -> Optional[int]:
    """Recheck band choice and minimal ``j`` at every step; return the first bad step."""
    params = host.params
    back = back_neighbours(h, order)
    mapping: dict[int, int] = {}
    free = np.ones(host.vertex_count, dtype=bool)
    for s in trace:
        if assign_band(h.degree(s.guest), params) != s.k:
            return s.i
        images = [mapping[y] for y in back[s.guest]]
        for j in range(1, s.j):
            lo, hi = params.subblock_range(s.k, j)
            if _candidate_mask(host, images, lo, hi, free).size:
                return s.i
        lo, hi = params.subblock_range(s.k, s.j)
        if not (lo <= s.host < hi) or not free[s.host]:
            return s.i
        if any(not host.adj[u, s.host] for u in images):
            return s.i
        mapping[s.guest] = s.host
        free[s.host] = False
    return None


def embed_guest(
    h: Graph, host: HostGraph, options: Union[EmbedOptions, None] = None
) -> tuple[DegeneracyResult, EmbedResult]:
    """Recompute the guest's degeneracy order and embed it."""
    order = degeneracy_order(h)
    return order, embed(h, order, host, options or EmbedOptions())
