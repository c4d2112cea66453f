"""
Greedy embedding
================

Embed a random 2-degenerate guest vertex by vertex: each guest goes to the
block matching its degree and to the first sub-block holding a free common
neighbour of its already placed back-neighbours.
"""

from degenuniv import (
    EmbedOptions,
    degeneracy_order,
    derive_params,
    embed,
    gen_random_degenerate,
    sample_host,
    verify_embedding,
)
from degenuniv.embedder import assert_ledger, ledger, well_behaved_report

p = derive_params(2000, 2, block_constant=4, prob_boost=0.3)
host = sample_host(p, seed=7)
guest = gen_random_degenerate(600, 2, seed=1, mode="varied")
order = degeneracy_order(guest)

res = embed(guest, order, host, EmbedOptions())
print("embedded:", res.ok)
print("verification:", verify_embedding(guest, host, res.embedding) or "ok")
print("occupancy per (block, sub-block):")
print(res.occupancy)

for step in res.trace[:5]:
    print(" ", step.line())

# The occupancy caps and the well-behavedness conditions are diagnostics at
# this scale; they are only guaranteed at the default constants.
print("first ledger breach:", assert_ledger(res.trace, ledger(p)))
print("well-behaved violations:", well_behaved_report(res, guest, order, p))
