import math
from itertools import combinations
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sidorenko_blowups.graphs import (
    BipartiteGraph,
    GraphError,
    WeightVector,
    alpha_profile,
    blow_up,
    companion_graph,
    degree_profile,
    disjoint_union,
    make_complete_bipartite,
    make_downset,
    make_mobius,
    make_mr_incidence,
    minimal_blowup_exponent,
    theorem1_applies,
    weighted_edge_count,
)

P3 = BipartiteGraph(2, [[1, 2]])


@st.composite
def graphs(draw, max_a=5, max_b=5, max_deg=None):
    m = draw(st.integers(1, max_a))
    nbhds = draw(st.lists(st.sets(st.integers(1, m), min_size=1, max_size=max_deg), min_size=1, max_size=max_b))
    return BipartiteGraph(m, nbhds)


# --- constructors ----------------------------------------------------------

def test_incidence_examples():
    F = make_mr_incidence(5, 3)
    assert F.b_size == 10 and F.num_edges == 30
    assert make_mr_incidence(4, 4).b_neighborhoods == ((1, 2, 3, 4),)
    match = make_mr_incidence(4, 1)
    assert match.b_neighborhoods == ((1,), (2,), (3,), (4,))
    assert match.a_degrees() == [1, 1, 1, 1]


@pytest.mark.parametrize("m, r", [(0, 1), (3, 0), (3, 4)])
def test_incidence_rejects(m, r):
    with pytest.raises(GraphError):
        make_mr_incidence(m, r)


def test_downset_examples():
    J = make_downset(3, 2)
    assert J.b_size == 6 and J.num_edges == 9
    assert set(make_downset(2, 2).b_neighborhoods) == {(1,), (2,), (1, 2)}
    assert make_downset(2, 2).num_edges == 4
    assert make_downset(5, 1).b_neighborhoods == make_mr_incidence(5, 1).b_neighborhoods


def test_mobius():
    M = make_mobius()
    assert M.b_size == 5 and all(len(nb) == 3 for nb in M.b_neighborhoods)
    assert M.a_degrees() == [3] * 5
    triples = set(combinations(range(1, 6), 3))
    assert set(M.b_neighborhoods) <= triples
    assert 2 * len(set(M.b_neighborhoods)) == len(triples)
    # complement of a 10-cycle: every A-vertex misses exactly two B-vertices
    assert M.num_edges == 25 - 10


def test_blow_up_examples():
    M = make_mobius()
    assert blow_up(M, 1) == M
    M2 = blow_up(M, 2)
    assert M2.b_size == 10 and M2.num_edges == 30 and degree_profile(M2).counts == {3: 10}
    assert blow_up(P3, 3) == make_complete_bipartite(2, 3)
    with pytest.raises(GraphError):
        blow_up(M, 0)


def test_disjoint_union_examples():
    M = make_mobius()
    assert disjoint_union(M, BipartiteGraph(0, [])) == M
    MM = disjoint_union(M, M)
    assert MM.a_size == 10 and degree_profile(MM).counts == {3: 10}
    PP = disjoint_union(P3, P3)
    assert PP.a_size == 4 and degree_profile(PP)[2] == 2


def test_degree_profile_examples():
    assert degree_profile(make_mobius()).counts == {3: 5}
    assert degree_profile(blow_up(make_mobius(), 2)).max_degree == 3
    prof = degree_profile(make_downset(3, 2))
    assert prof.counts == {1: 3, 2: 3} and prof.max_degree == 2
    with pytest.raises(GraphError):
        degree_profile(BipartiteGraph(3, []))


def test_theorem1_examples():
    ok, wit = theorem1_applies(blow_up(make_mobius(), 2))
    assert ok and wit[-1] == (3, 10, 10, True)
    ok, wit = theorem1_applies(make_mobius())
    assert not ok and wit[-1] == (3, 10, 5, False)
    ok, wit = theorem1_applies(make_downset(3, 2))
    assert not ok and wit[0] == (1, 6, 3, False)


def test_minimal_exponent_examples():
    assert minimal_blowup_exponent(make_mobius()) == 2
    assert minimal_blowup_exponent(P3) == 1
    assert minimal_blowup_exponent(make_mr_incidence(3, 1)) == 1


def test_companion_examples():
    C = companion_graph(P3)
    assert C.a_size == 2 and degree_profile(C).counts == {2: 23}
    C = companion_graph(make_mobius())
    assert degree_profile(C).counts == {3: 40315}
    assert theorem1_applies(disjoint_union(make_mobius(), C))[0]
    # zero deficit: B' is empty but the union still passes
    H = BipartiteGraph(1, [[1]] * 2)
    assert companion_graph(H).b_size == 0
    assert theorem1_applies(disjoint_union(H, companion_graph(H)))[0]


def test_alpha_profile_examples():
    M = make_mobius()
    assert alpha_profile(blow_up(M, 2)) == WeightVector({3: 1})
    assert alpha_profile(M)[3] == Fraction(1, 2) and alpha_profile(M)[1] == 0
    for m in range(1, 6):
        for r in range(1, m + 1):
            assert alpha_profile(make_downset(m, r)) == WeightVector([1] * r)


def test_weighted_edge_count():
    # e_alpha(J) with alpha the profile of H equals e(H)
    H = blow_up(make_mobius(), 2)
    assert weighted_edge_count(make_downset(5, 3), alpha_profile(H)) == 30
    assert weighted_edge_count(make_downset(3, 2), [2, 1]) == 2 * 3 + 1 * 6


def test_weight_vector_rejects_negative():
    with pytest.raises(GraphError):
        WeightVector({1: -1})


def test_graph_validation():
    with pytest.raises(GraphError):
        BipartiteGraph(2, [[1, 3]])
    with pytest.raises(GraphError):
        BipartiteGraph(2, [[1, 1]])


def test_json_round_trip():
    for H in (make_mobius(), make_downset(4, 3), blow_up(P3, 2)):
        assert BipartiteGraph.from_json(H.to_json()) == H
    assert make_mobius().to_dict()["b_neighborhoods"][0] == [1, 2, 3]


# --- properties -------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(graphs(), st.integers(1, 4))
def test_blow_up_scales(H, p):
    Hp = blow_up(H, p)
    assert Hp.num_edges == p * H.num_edges
    assert degree_profile(Hp).counts == {k: p * d for k, d in degree_profile(H).counts.items()}


def _brute_min_p(H, limit):
    for q in range(1, limit + 1):
        if theorem1_applies(blow_up(H, q))[0]:
            return q
    return None


@settings(max_examples=40, deadline=None)
@given(graphs(max_a=4, max_b=4))
def test_minimal_exponent_brute_force(H):
    p = minimal_blowup_exponent(H)
    m, r = H.a_size, H.max_degree
    assert (math.factorial(m) // math.factorial(m - r)) % p == 0
    assert _brute_min_p(H, p) == p


@settings(max_examples=40, deadline=None)
@given(graphs(max_a=6, max_b=4, max_deg=2))
def test_companion_union_passes(H):
    # (m + r)! B-vertices at most 8! here
    assert theorem1_applies(disjoint_union(H, companion_graph(H)))[0]


@pytest.mark.parametrize("m", range(1, 6))
def test_downset_restricts_to_incidence(m):
    for r in range(1, m + 1):
        top = sorted(nb for nb in make_downset(m, r).b_neighborhoods if len(nb) == r)
        assert top == sorted(make_mr_incidence(m, r).b_neighborhoods)
