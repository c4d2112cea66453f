"""
How far apart are the bounds?
=============================

A universal graph for n-vertex d-degenerate guests needs at least
n^(2-1/d)/(1000 d) edges. The construction spends a polylog factor more,
so the log-log slope of the ratio tends to zero, but only slowly.
"""

import numpy as np

from degenuniv.analysis import bounds_table, gap_slope

for lo, hi in [(1e4, 1e8), (1e20, 1e40), (1e60, 1e100)]:
    rows = bounds_table(np.logspace(np.log10(lo), np.log10(hi), 21), 2)
    print(f"n in [{lo:.0e}, {hi:.0e}]: slope of log(budget/lower) = {gap_slope(rows):.4f}")
