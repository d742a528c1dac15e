"""
Three roads to the Heawood graph
================================

LCF notation, the Fano-plane difference set {1, 2, 4} mod 7, and the
labelled catalog drawing all give the same graph. Removing two adjacent
vertices leaves a Moebius ladder with its rungs subdivided.
"""

from udembed import catalog, delete_vertex, girth, graph_from_difference_set, graph_from_lcf, isomorphic
from udembed.graphs import is_bipartite

lcf = graph_from_lcf("(5,-5)^7")
fano = graph_from_difference_set([1, 2, 4], 7)
drawn = catalog("heawood")

for g in (lcf, fano, drawn):
    print(f"{g.name:22s} n={g.n} m={len(g.edges)} girth={girth(g)} bipartite={is_bipartite(g)}")
print("lcf ~ fano:", isomorphic(lcf, fano), " fano ~ drawn:", isomorphic(fano, drawn))

h = delete_vertex(delete_vertex(drawn, "1"), "a")
print("H - {1,a} ~ subdivided Moebius ladder:", isomorphic(h, catalog("mobius_ladder_m4_subdivided")))
