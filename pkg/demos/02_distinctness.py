"""
When Feasible is not enough: K2,3
=================================

The distance equations of K2,3 have solutions, but every one of them puts
two vertices on the same point. Adding a Rabinowitsch variable per
same-side pair makes the coincidences illegal and the basis becomes {1}.
"""

from udembed import SolveOptions, buchberger, catalog, distance_constraints, saturate_distinctness, solve
from udembed.poly import auto_pin, same_part_pairs

g = catalog("k2_3")
system = distance_constraints(g, auto_pin(g))
plain = buchberger(system)
print("plain:", plain.status, "with", len(plain.basis), "basis elements")

pairs = same_part_pairs(g)
print("forcing apart:", pairs)
saturated = buchberger(saturate_distinctness(system, pairs))
print("saturated:", saturated.status, saturated.lines())

# the numerical search agrees: it can satisfy the edges only by collapsing points
res = solve(g, SolveOptions(restarts=200))
print("numeric success:", res.success, " best separation: %.2e" % res.separation)
