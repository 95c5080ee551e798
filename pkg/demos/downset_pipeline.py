"""
From a bipartite graph to the chain hypergraph
==============================================

For a graph H that passes the divisibility test, t(H) is bounded below by a
weighted density of the downset graph J, which equals a density of the
chain hypergraph under a product kernel, which in turn is bounded by a power
of the edge density.
"""

import math

from sidorenko_blowups import (
    alpha_profile,
    blow_up,
    build_G_alpha,
    build_H_alpha,
    chain_betas,
    chain_exponents,
    edge_density,
    hom_density,
    hyper_density_structured,
    make_downset,
    make_mobius,
    product_kernel,
    random_graphon,
    weighted_density,
    weighted_edge_count,
)

H = blow_up(make_mobius(), 2)
m, r = H.a_size, H.max_degree
alpha = alpha_profile(H)
J = make_downset(m, r)
print(f"m={m} r={r} alpha={alpha}  e_alpha(J)={weighted_edge_count(J, alpha)}  e(H)={H.num_edges}")

W = random_graphon(2024, max_blocks=3)
tH = hom_density(H, W)
tJ = weighted_density(J, W, alpha)
print(f"t(H)        = {float(tH):.10e}")
print(f"t_J^alpha   = {float(tJ):.10e}")
print(f"t(K2)^e(H)  = {float(edge_density(W) ** H.num_edges):.10e}")

###############################################################################
# A smaller instance where the hypergraph side is visible: m = 4, r = 2.

m, r, alpha = 4, 2, {1: 3, 2: 1}
betas = chain_betas(m, r, alpha)
print("beta =", betas, " q =", chain_exponents(r, betas))
Hc = build_H_alpha(m, r, alpha)
Gc = build_G_alpha(r, betas)
print("class sizes of H_alpha:", Hc.class_sizes(), " edges:", Hc.num_edges,
      " = C(m,r) * e(G_alpha) =", math.comb(m, r) * Gc.num_edges)

K = product_kernel(W, m, r, alpha)
lhs = weighted_density(make_downset(m, r), W, alpha)
rhs = hyper_density_structured(Hc, K)
print("t_J^alpha == t(H_alpha; W_alpha):", lhs == rhs)
small = hyper_density_structured(Gc, K)
print("t(H_alpha) >= t(G_alpha)^C(m,r):", rhs >= small ** math.comb(m, r))
