"""
The Mobius graph and its square
===============================

M is K_{5,5} minus a 10-cycle.  It fails the divisibility test, but its
2-fold blow-up passes, and t(M^2) dominates the (5,3)-incidence graph.
"""

from fractions import Fraction

from sidorenko_blowups import (
    blow_up,
    constant_graphon,
    degree_profile,
    edge_density,
    hom_density,
    make_mobius,
    make_mr_incidence,
    minimal_blowup_exponent,
    random_graphon,
    theorem1_applies,
)

M = make_mobius()
print("neighbourhoods of M:", M.b_neighborhoods)
print("degree profile:", degree_profile(M).counts)

###############################################################################
# Divisibility: C(5,3) C(3,3) = 10 must divide d_3.  M has d_3 = 5.

print("M passes:", theorem1_applies(M))
p = minimal_blowup_exponent(M)
M2 = blow_up(M, p)
print(f"least blow-up exponent {p}; M^{p} passes:", theorem1_applies(M2)[0])

###############################################################################
# Densities on a few random step graphons with several blocks, all exact rationals.

F53 = make_mr_incidence(5, 3)
graphons = (random_graphon(seed, max_blocks=3, denominator_bound=6) for seed in range(100))
for seed, W in enumerate(W for W in graphons if W.block_count > 1):
    if seed == 5:
        break
    tm2, tf = hom_density(M2, W), hom_density(F53, W)
    k2 = edge_density(W) ** 30
    print(f"graphon {seed}: n={W.block_count}  t(M^2)={float(tm2):.6e}  t(F_5,3)={float(tf):.6e}  "
          f"t(K2)^30={float(k2):.6e}  gap={float(tm2 - tf):.2e}")

###############################################################################
# At a constant graphon every side equals c^30.

c = Fraction(2, 3)
W = constant_graphon(c)
print("constant graphon:", hom_density(M2, W) == hom_density(F53, W) == edge_density(W) ** 30)
