"""Simple undirected graphs, degeneracy orderings and embedding checks."""

from __future__ import annotations

import heapq
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Optional, Protocol

from .errors import EdgeListError, PreconditionError

EmbeddingMap = Sequence[Optional[int]]
"""Per guest vertex, the host vertex it maps to (``None`` if unassigned)."""


class Graph:
    """Immutable simple undirected graph on vertices ``0..vertex_count-1``."""

    __slots__ = ("_adj", "_m")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]] = ()):
        if vertex_count < 0:
            raise PreconditionError("vertex_count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(vertex_count)]
        m = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise PreconditionError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise PreconditionError(f"self-loop at {u}")
            if v in adj[u]:
                raise PreconditionError(f"duplicate edge ({u}, {v})")
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        self._adj = tuple(frozenset(s) for s in adj)
        self._m = m

    @property
    def vertex_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return self._m

    @property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        return self._adj

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(s) for s in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        """Sorted list of edges ``(u, v)`` with ``u < v``."""
        return sorted((u, v) for u, nb in enumerate(self._adj) for v in nb if u < v)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"

    # Small constructors used throughout tests and generators.

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        if n < 3:
            raise PreconditionError("a cycle needs at least 3 vertices")
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def star(cls, leaves: int) -> Graph:
        return cls(leaves + 1, ((0, i) for i in range(1, leaves + 1)))

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> Graph:
        return cls(a + b, ((u, a + v) for u in range(a) for v in range(b)))


class HostLike(Protocol):
    @property
    def vertex_count(self) -> int: ...

    def has_edge(self, u: int, v: int) -> bool: ...


@dataclass(frozen=True)
class DegeneracyResult:
    degeneracy: int
    order: tuple[int, ...]

    def positions(self) -> list[int]:
        pos = [0] * len(self.order)
        for i, v in enumerate(self.order):
            pos[v] = i
        return pos


def degeneracy_order(g: Graph) -> DegeneracyResult:
    """Degeneracy and a witnessing order by repeated min-degree removal.

    Ties are broken by lowest vertex index. The returned order is the
    reversed removal sequence, so every vertex has at most ``degeneracy``
    neighbours before it.
    """
    n = g.vertex_count
    deg = g.degrees()
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    removed = [False] * n
    removal: list[int] = []
    best = 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        removal.append(v)
        best = max(best, d)
        for u in g.neighbors(v):
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    removal.reverse()
    return DegeneracyResult(best, tuple(removal))


def back_degrees(g: Graph, order: Sequence[int]) -> list[int]:
    """Number of earlier neighbours of each vertex, indexed by position."""
    pos = {v: i for i, v in enumerate(order)}
    return [sum(1 for u in g.neighbors(v) if pos[u] < i) for i, v in enumerate(order)]


def max_degree(g: Graph) -> int:
    return max(g.degrees(), default=0)


def is_connected(g: Graph) -> bool:
    n = g.vertex_count
    if n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in g.neighbors(v):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


@dataclass
class DegreeProfileReport:
    d: int
    n: int
    violations: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def degree_profile_check(g: Graph, d: int) -> DegreeProfileReport:
    """Check that at most ``2*d*n/k`` vertices have degree at least ``k``.

    Every ``d``-degenerate graph passes; the returned report lists each
    threshold ``k`` at which the count is too large.
    """
    n = g.vertex_count
    degs = sorted(g.degrees(), reverse=True)
    report = DegreeProfileReport(d, n)
    # Only thresholds up to the max degree can have a non-zero count.
    count = 0
    for k in range(max(degs, default=0), 0, -1):
        while count < n and degs[count] >= k:
            count += 1
        if count * k > 2 * d * n:
            report.violations.append(k)
    report.violations.sort()
    return report


@dataclass(frozen=True)
class Violation:
    kind: str  # "not injective" | "missing edge" | "out of range"
    detail: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def verify_embedding(h: Graph, host: HostLike, m: EmbeddingMap) -> Optional[Violation]:
    """Return ``None`` if ``m`` embeds ``h`` into ``host``, else the first violation.

    Raises PreconditionError if some guest vertex is unassigned.
    """
    if len(m) != h.vertex_count:
        raise PreconditionError("embedding length differs from guest vertex count")
    for x, v in enumerate(m):
        if v is None:
            raise PreconditionError(f"unassigned vertex {x}")
    owner: dict[int, int] = {}
    for x, v in enumerate(m):
        if not 0 <= v < host.vertex_count:
            return Violation("out of range", (x, v))
        if v in owner:
            return Violation("not injective", (owner[v], x, v))
        owner[v] = x
    for x, y in h.edges():
        if not host.has_edge(m[x], m[y]):
            return Violation("missing edge", (x, y))
    return None


def write_edge_list(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.vertex_count} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def _parse_pair(line: str, lineno: int) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise EdgeListError(f"line {lineno}: malformed line {line!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise EdgeListError(f"line {lineno}: malformed line {line!r}") from None


def read_edge_list(text: str) -> Graph:
    """Parse the ``n m`` header plus ``m`` lines of ``u v`` pairs."""
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise EdgeListError("missing header")
    n, m = _parse_pair(lines[0][1], lines[0][0])
    if n < 0 or m < 0:
        raise EdgeListError("negative header values")
    body = lines[1:]
    if len(body) != m:
        raise EdgeListError(f"header declares {m} edges, found {len(body)}")
    seen: set[tuple[int, int]] = set()
    edges = []
    for lineno, ln in body:
        u, v = _parse_pair(ln, lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListError(f"line {lineno}: index out of range")
        if u == v:
            raise EdgeListError(f"line {lineno}: self-loop")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListError(f"line {lineno}: duplicate edge")
        seen.add(key)
        edges.append(key)
    return Graph(n, edges)
