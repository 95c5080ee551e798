from fractions import Fraction
from itertools import product

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from sidorenko_blowups.arith import ExactnessError, InfeasibleSizeError
from sidorenko_blowups.graphon import (
    GraphonError,
    StepGraphon,
    constant_graphon,
    edge_density,
    graphon_from_graph,
    hom_density,
    hom_density_oracle,
    random_graphon,
    rho,
    rooted_density,
    rooted_moment,
    weighted_density,
)
from sidorenko_blowups.graphs import (
    BipartiteGraph,
    blow_up,
    make_complete_bipartite,
    make_downset,
    make_even_cycle,
    make_mobius,
    weighted_edge_count,
)

F = Fraction
IDENT = StepGraphon([F(1, 2), F(1, 2)], [[1, 0], [0, 1]])
K2 = BipartiteGraph(1, [[1]])
P3 = BipartiteGraph(2, [[1, 2]])


@st.composite
def small_graphs(draw, max_v=7):
    v = draw(st.integers(2, max_v))
    m = draw(st.integers(1, v - 1))
    nbhds = draw(st.lists(st.sets(st.integers(1, m)), min_size=v - m, max_size=v - m))
    return BipartiteGraph(m, nbhds)


seeds = st.integers(0, 2**64 - 1)


def test_graphon_from_graph():
    assert edge_density(graphon_from_graph([[0, 1], [1, 0]])) == F(1, 2)
    assert edge_density(graphon_from_graph([[0, 1, 1], [1, 0, 1], [1, 1, 0]])) == F(2, 3)
    Z = graphon_from_graph([[0] * 3] * 3)
    assert Z.is_constant() and Z.values[0][0] == 0
    with pytest.raises(GraphonError):
        graphon_from_graph([[0, 1], [0, 0]])


def test_graphon_validation():
    with pytest.raises(GraphonError):
        StepGraphon([F(1, 2), F(1, 3)], [[0, 0], [0, 0]])
    with pytest.raises(GraphonError):
        StepGraphon([1], [[2]])
    with pytest.raises(GraphonError):
        StepGraphon([F(1, 2), F(1, 2)], [[0, 1], [0, 0]])


def test_random_graphon_contract():
    for seed in (0, 1, 2**63 + 5):
        W = random_graphon(seed, 3, 6)
        assert W == random_graphon(seed, 3, 6)
        assert sum(W.weights) == 1 and W.block_count <= 3
        n = W.block_count
        assert all(W.values[i][j] == W.values[j][i] for i in range(n) for j in range(n))


def test_edge_density_examples():
    assert edge_density(constant_graphon(F(2, 7))) == F(2, 7)
    assert edge_density(IDENT) == F(1, 2)
    assert edge_density(StepGraphon([F(1, 3), F(2, 3)], [[0, 1], [1, 0]])) == F(4, 9)


def test_rho_examples():
    assert rho(constant_graphon(F(1, 2)), [0, 0, 0]) == F(1, 8)
    assert rho(IDENT, [0, 0]) == F(1, 2)
    assert rho(IDENT, [0, 1]) == 0
    assert rho(IDENT, []) == 1


def test_hom_density_examples():
    c = F(3, 5)
    assert hom_density(K2, constant_graphon(c)) == c
    assert hom_density(make_complete_bipartite(2, 2), IDENT) == F(1, 8)
    assert hom_density_oracle(make_complete_bipartite(2, 2), IDENT) == F(1, 8)
    assert hom_density(make_mobius(), constant_graphon(c)) == c**15


def test_oracle_examples():
    W = random_graphon(11, 3, 5)
    assert hom_density_oracle(K2, W) == edge_density(W)
    assert hom_density_oracle(P3, IDENT) == F(1, 4)
    H = make_even_cycle(3)
    assert hom_density_oracle(H, constant_graphon(F(1, 3))) == F(1, 3) ** H.num_edges


def test_weighted_density_examples():
    W = random_graphon(5, 3, 6)
    M = make_mobius()
    assert weighted_density(M, W, {3: 1}) == hom_density(M, W)
    assert weighted_density(M, W, {3: 2}) == hom_density(blow_up(M, 2), W)
    J = make_downset(3, 2)
    alpha = {1: 2, 2: 1}
    c = F(2, 3)
    assert weighted_density(J, constant_graphon(c), alpha) == c ** int(weighted_edge_count(J, alpha))


def test_weighted_density_fractional_needs_float():
    J = make_downset(3, 2)
    with pytest.raises(ExactnessError):
        weighted_density(J, IDENT, {1: F(1, 2), 2: 1}, mode="exact")
    val = weighted_density(J, constant_graphon(F(1, 4)), {1: F(1, 2), 2: 1})
    assert isinstance(val, mpmath.mpf)
    # e_alpha = 3 * 1/2 + 3 * 2 = 15/2
    with mpmath.workprec(128):
        assert abs(val - mpmath.mpf(1) / 4 ** mpmath.mpf(7.5)) < mpmath.mpf(10) ** -35


def test_rooted_density_examples():
    c = F(1, 3)
    H = make_mobius()
    for x in product(range(1), repeat=5):
        assert rooted_density(H, constant_graphon(c), x) == c**15
    assert rooted_density(P3, IDENT, [0, 0]) == F(1, 2)
    assert rooted_density(P3, IDENT, [0, 1]) == 0
    W = random_graphon(3, 3, 6)
    assert rooted_moment(make_mobius(), W, 1) == hom_density(make_mobius(), W)


def test_float_mode_matches_exact():
    W = random_graphon(9, 3, 6)
    H = make_mobius()
    exact = hom_density(H, W)
    approx = hom_density(H, W, mode="float")
    with mpmath.workprec(128):
        err = abs(approx - mpmath.mpf(exact.numerator) / exact.denominator)
        assert err <= mpmath.mpf(10) ** -30 * abs(approx)


def test_caps():
    with pytest.raises(InfeasibleSizeError):
        hom_density_oracle(make_mobius(), IDENT, cap=10)
    with pytest.raises(InfeasibleSizeError):
        hom_density(make_mobius(), StepGraphon([F(1, 4)] * 4, [[0] * 4] * 4), cap=10)


def test_json_round_trip():
    W = random_graphon(17, 3, 6)
    assert StepGraphon.from_json(W.to_json()) == W
    assert IDENT.to_dict() == {"weights": ["1/2", "1/2"], "values": [["1", "0"], ["0", "1"]]}
    with pytest.raises(GraphonError):
        StepGraphon.from_dict({"weights": ["1/0"], "values": [["1"]]})


# --- properties -------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(small_graphs(), seeds)
def test_oracle_equivalence(H, seed):
    W = random_graphon(seed, 3, 5)
    assert hom_density(H, W) == hom_density_oracle(H, W)


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_v=6), seeds, st.integers(1, 3))
def test_blow_up_identity(H, seed, p):
    W = random_graphon(seed, 3, 5)
    assert rooted_moment(H, W, p) == hom_density(blow_up(H, p), W)


@settings(max_examples=40, deadline=None)
@given(small_graphs(), seeds, st.data())
def test_monotone_in_kernel(H, seed, data):
    W = random_graphon(seed, 3, 5)
    n = W.block_count
    bumped = [list(row) for row in W.values]
    for i in range(n):
        for j in range(i, n):
            t = data.draw(st.fractions(0, 1, max_denominator=5))
            bumped[i][j] = bumped[j][i] = W.values[i][j] + (1 - W.values[i][j]) * t
    W2 = StepGraphon(W.weights, bumped)
    assert hom_density(H, W) <= hom_density(H, W2)


@settings(max_examples=40, deadline=None)
@given(small_graphs(), seeds, st.permutations(range(3)))
def test_block_permutation_invariance(H, seed, perm):
    W = random_graphon(seed, 3, 5)
    perm = [p for p in perm if p < W.block_count]
    assert hom_density(H, W.permuted(perm)) == hom_density(H, W)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), seeds)
def test_complete_bipartite_sidorenko(a, b, seed):
    W = random_graphon(seed, 3, 6)
    assert hom_density(make_complete_bipartite(a, b), W) >= edge_density(W) ** (a * b)
