"""
Chain hypergraphs as reflection hypergraphs
===========================================

Vertices are cosets of subgroups of S_m generated by adjacent transpositions;
every group element w gives the edge (w W_0, ..., w W_r).
"""

import math

from sidorenko_blowups import (
    GroupSpec,
    blowup_spec,
    build_G_alpha,
    build_H_alpha,
    enumerate_cosets,
    galpha_spec,
    halpha_spec,
    hypergraph_blowup,
    partite_isomorphic,
    reflection_hypergraph,
)

S3 = GroupSpec(3)
for gens in ([], [2], [1, 2]):
    print(f"S_3 / <{gens}>: {len(enumerate_cosets(S3, gens))} cosets")

###############################################################################
# The single-host hypergraph for r = 3.

spec = galpha_spec(3)
print("generator sets:", [sorted(s) for s in spec.generator_sets])
G = reflection_hypergraph(spec)
ok, _ = partite_isomorphic(G, build_G_alpha(3, [1, 1, 1]))
print("edges:", G.num_edges, " isomorphic to the chain construction:", ok)

###############################################################################
# All hosts at once, over S_m.

for m, r in [(3, 2), (4, 2), (4, 3)]:
    alpha = [math.comb(m - k, r - k) for k in range(1, r + 1)]
    H = reflection_hypergraph(halpha_spec(m, r))
    print(f"(m,r)=({m},{r}): {H.num_edges} edges, isomorphic:",
          partite_isomorphic(H, build_H_alpha(m, r, alpha))[0])

###############################################################################
# Blowing up a level: extend the group by S_p.

big = blowup_spec(galpha_spec(2), 1, 2)
left = reflection_hypergraph(big)
right = hypergraph_blowup(reflection_hypergraph(galpha_spec(2)), 1, 2)
print("group order", big.group.order, " blow-up isomorphism:", partite_isomorphic(left, right)[0])
