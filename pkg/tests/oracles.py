"""Brute-force reference computations, independent of the package code paths."""

from itertools import combinations, permutations


def degeneracy_brute(n, edges):
    """Max over non-empty vertex subsets of the induced minimum degree."""
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    best = 0
    for r in range(1, n + 1):
        for sub in combinations(range(n), r):
            s = set(sub)
            best = max(best, min(len(adj[v] & s) for v in sub))
    return best


def injections_preserving(guest_n, guest_edges, host_n, host_edges):
    """All injective maps guest -> host that send edges to edges."""
    he = {frozenset(e) for e in host_edges}
    out = []
    for image in permutations(range(host_n), guest_n):
        if all(frozenset((image[u], image[v])) in he for u, v in guest_edges):
            out.append(image)
    return out


def level_count_float(n, d):
    """Smallest N with n ** (d ** (1 - N)) <= 3 ** (d * d), by direct float evaluation."""
    big_n = 1
    while n ** (d ** (1.0 - big_n)) > 3.0 ** (d * d):
        big_n += 1
    return big_n
