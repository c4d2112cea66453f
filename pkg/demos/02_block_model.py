"""
The block-model host
====================

Derive level count, degree thresholds, edge probabilities and block sizes,
then sample a host with overridden constants small enough for a laptop.
"""

from degenuniv import audit_edges, derive_params, sample_host

# Default constants at n = 10^6 give three levels; the host itself would
# have more than 10^8 vertices, so we only look at the arithmetic.
big = derive_params(10**6, 2)
print("levels:", big.levels, "thresholds:", [round(x, 2) for x in big.delta])
print("block sizes:", big.block_sizes)
print("size checks:", big.size_checks())

# Shrinking the block constant to 4 makes n = 2000 tractable.
p = derive_params(2000, 2, block_constant=4, prob_boost=0.3)
host = sample_host(p, seed=7)
print(f"host: {host.vertex_count} vertices, {host.edge_count} edges")

audit = audit_edges(host)
for row in audit.pairs:
    print(f"  W_{row.i} x W_{row.k}: observed {row.observed}, expected {row.expected:.1f}, z = {row.z:+.2f}")
