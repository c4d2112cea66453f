"""
Degeneracy orders
=================

Peel off a minimum-degree vertex until nothing is left; the largest degree
seen at removal time is the degeneracy, and the reversed removal sequence is
an order where every vertex has at most that many earlier neighbours.
"""

from degenuniv.graph import Graph, back_degrees, degeneracy_order, degree_profile_check

# A 5-cycle: every vertex has degree 2, so nothing smaller can be peeled.
c5 = Graph.cycle(5)
res = degeneracy_order(c5)
print("C5 degeneracy:", res.degeneracy, "order:", res.order)
print("back-degrees along the order:", back_degrees(c5, res.order))

# A star is 1-degenerate no matter how large the centre's degree gets.
star = Graph.star(99)
print("star degeneracy:", degeneracy_order(star).degeneracy)

# The degree profile check: few vertices can have large degree in a
# d-degenerate graph. K6 is not 1-degenerate and the check catches it.
print("K6 claimed 1-degenerate ->", degree_profile_check(Graph.complete(6), 1))
