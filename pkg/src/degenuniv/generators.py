"""Guest graph families of bounded degeneracy, and corpora built from them."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Literal, Optional

import numpy as np

from .errors import PreconditionError
from .graph import Graph, write_edge_list

FAMILIES = ("random_degenerate", "bounded_degree", "star", "complete_bipartite", "d_ary_tree")


def _distinct(rng: np.random.Generator, upper: int, count: int) -> list[int]:
    """``count`` distinct integers from ``range(upper)``, in draw order."""
    picked: list[int] = []
    while len(picked) < count:
        v = int(rng.integers(upper))
        if v not in picked:
            picked.append(v)
    return picked


def gen_random_degenerate(
    n: int, d: int, seed: int, mode: Literal["full", "varied"] = "full"
) -> Graph:
    """Each vertex ``i`` joins uniformly chosen earlier vertices.

    In mode ``"full"`` vertex ``i`` gets exactly ``min(d, i)`` back-neighbours;
    in ``"varied"`` the count is uniform on ``0..min(d, i)``. The natural
    order is a ``d``-degeneracy order.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if mode not in ("full", "varied"):
        raise PreconditionError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(1, n):
        cap = min(d, i)
        count = cap if mode == "full" else int(rng.integers(cap + 1))
        edges.extend((u, i) for u in _distinct(rng, i, count))
    return Graph(n, edges)


def gen_bounded_degree_degenerate(
    n: int, d: int, seed: int, *, eligible_log: Optional[list[int]] = None
) -> Graph:
    """Connected graph with max degree <= 2d+1 and natural d-degeneracy order.

    Vertex ``i`` is joined to between 1 and ``d`` earlier vertices whose
    current degree is at most ``2d``: the count is uniform on
    ``1..min(d, #eligible)`` and the vertices are drawn one at a time.
    If ``eligible_log`` is given, the number of eligible vertices at each
    step is appended to it.
    """
    if n < 2:
        raise PreconditionError("n must be >= 2")
    rng = np.random.default_rng(seed)
    cap = 2 * d
    deg = [0] * n
    eligible = [0]  # vertices with degree <= 2d, unordered
    where = {0: 0}
    edges = []

    def drop(u: int) -> None:
        idx = where.pop(u)
        last = eligible.pop()
        if last != u:
            eligible[idx] = last
            where[last] = idx

    for i in range(1, n):
        if eligible_log is not None:
            eligible_log.append(len(eligible))
        if not eligible:
            raise AssertionError("no eligible vertex; the degree bound argument is broken")
        count = 1 + int(rng.integers(min(d, len(eligible))))
        chosen: list[int] = []
        for _ in range(count):
            # Rejection keeps the draw uniform over eligible, not yet chosen vertices.
            u = eligible[int(rng.integers(len(eligible)))]
            while u in chosen:
                u = eligible[int(rng.integers(len(eligible)))]
            chosen.append(u)
            deg[u] += 1
            deg[i] += 1
            edges.append((u, i))
            if deg[u] > cap:
                drop(u)
        eligible.append(i)
        where[i] = len(eligible) - 1
    return Graph(n, edges)


def gen_extremal(family: str, n: int, d: int = 1) -> Graph:
    """Deterministic extremal families: star, K_{d,n-d} and the complete d-ary tree."""
    if family == "star":
        if n < 1:
            raise PreconditionError("star needs n >= 1")
        return Graph.star(n - 1)
    if family == "complete_bipartite":
        if not 1 <= d < n:
            raise PreconditionError("complete_bipartite needs 1 <= d < n")
        return Graph.complete_bipartite(d, n - d)
    if family == "d_ary_tree":
        if d < 1 or n < 1:
            raise PreconditionError("d_ary_tree needs d >= 1 and n >= 1")
        return Graph(n, (((v - 1) // d, v) for v in range(1, n)))
    raise PreconditionError(f"unknown extremal family {family!r}")


@dataclass(frozen=True)
class CorpusSpec:
    n: int
    d: int
    family: str
    count: int = 1
    seed: int = 0
    knobs: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 1 or self.d < 0 or self.count < 1:
            raise PreconditionError("corpus spec needs n >= 1, d >= 0, count >= 1")
        if self.family not in FAMILIES:
            raise PreconditionError(f"unknown family {self.family!r}")

    def to_dict(self) -> dict:
        return asdict(self)


def instance_seed(seed: int, index: int) -> int:
    """Per-instance seed derived from the corpus seed and the instance index."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def generate_one(spec: CorpusSpec, index: int) -> Graph:
    s = instance_seed(spec.seed, index)
    if spec.family == "random_degenerate":
        return gen_random_degenerate(spec.n, spec.d, s, spec.knobs.get("mode", "full"))
    if spec.family == "bounded_degree":
        return gen_bounded_degree_degenerate(spec.n, spec.d, s)
    return gen_extremal(spec.family, spec.n, spec.d)


def generate_corpus(spec: CorpusSpec) -> list[Graph]:
    return [generate_one(spec, i) for i in range(spec.count)]


def write_corpus(spec: CorpusSpec, directory: str | Path) -> dict:
    """Write one edge-list file per instance plus ``manifest.json``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for i, g in enumerate(generate_corpus(spec)):
        name = f"{spec.family}_{i:04d}.txt"
        (out / name).write_text(write_edge_list(g))
        names.append(name)
    manifest = {"spec": spec.to_dict(), "seed": spec.seed, "count": spec.count, "files": names}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest
