"""
Common neighbour probabilities
==============================

The chance that a fixed vertex of W_k is adjacent to all of a set B of
earlier images is a product of edge probabilities. A Monte Carlo estimate
with a Wilson interval should cover it.
"""

from degenuniv import derive_params
from degenuniv.analysis import estimate_common_event
from degenuniv.embedder import BackMultiset

p = derive_params(10**12, 2)
lo, _ = p.block_range(3)
b = BackMultiset([frozenset({lo, lo + 1})])

est = estimate_common_event(p, b, 4, trials=20_000, seed=0)
print(f"analytic  {p.p(3, 4) ** 2:.5f}")
print(f"estimate  {est.p_hat:.5f}  95% CI [{est.ci[0]:.5f}, {est.ci[1]:.5f}]")
print(f"lower bound {est.bound:.3g} ({est.bound_branch} branch), consistent: {est.bound_consistent}")
