"""
Exact feasibility with Groebner bases
=====================================

K4 minus an edge has a unit-distance drawing, K4 does not. Pinning one
edge to (0,0)-(1,0) and completing the distance equations shows both.
"""

from udembed import buchberger, catalog, check_distinct, distance_constraints, extract_solutions
from udembed.poly import auto_pin

# K4 - e: two unit triangles sharing an edge
g = catalog("k4_minus_e")
system = distance_constraints(g, auto_pin(g))
result = buchberger(system)
print(result.status)
for line in result.lines():
    print("   ", line, "= 0")

# the basis is triangular in lex order, so back-substitute
solutions = extract_solutions(result)
coords = [system.coords_from_solution(s) for s in solutions.solutions]
for c, dup in check_distinct(coords, g):
    print({k: (round(x, 6), round(y, 6)) for k, (x, y) in c.items()}, "duplicates:", dup)

# one solution folds vertex 4 back onto vertex 1; the other three are fine

# K4: the basis collapses to {1}, so there is no solution at all
g = catalog("k4")
print(buchberger(distance_constraints(g, auto_pin(g))).lines())
