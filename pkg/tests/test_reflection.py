import math
import random
from itertools import chain, combinations, permutations

import pytest

from sidorenko_blowups.chains import build_G_alpha, build_H_alpha
from sidorenko_blowups.hypergraph import PartiteHypergraph
from sidorenko_blowups.reflection import (
    GroupCapError,
    GroupSpec,
    IsomorphismCapError,
    ReflectionSpec,
    blowup_spec,
    canonical_rep,
    compose,
    enumerate_cosets,
    galpha_spec,
    halpha_spec,
    hypergraph_blowup,
    partite_isomorphic,
    reflection_hypergraph,
    subgroup_elements,
    young_runs,
)


def subsets(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))


def ones(r):
    return [1] * r


def shuffled(G, seed):
    rng = random.Random(seed)
    perms = []
    for c in G.classes:
        p = list(range(len(c)))
        rng.shuffle(p)
        perms.append(p)
    return G.relabelled(perms)


def closure_cosets(group, gens):
    """Cosets as frozensets of elements, the slow way."""
    H = subgroup_elements(group, gens)
    return {frozenset(compose(w, h) for h in H) for w in group.elements()}


# --- groups and cosets ----------------------------------------------------------

def test_group_spec():
    G = GroupSpec(3, (2,))
    assert G.degree == 5 and G.order == 12 and G.p == 2
    assert G.simple_reflections() == [1, 2, 4]
    assert len(G.elements()) == 12
    with pytest.raises(GroupCapError):
        GroupSpec(6).elements(cap=100)


def test_coset_examples():
    S3 = GroupSpec(3)
    assert len(enumerate_cosets(S3, [])) == 6
    assert len(enumerate_cosets(S3, [1, 2])) == 1
    assert len(enumerate_cosets(S3, [2])) == 3
    with pytest.raises(ValueError):
        enumerate_cosets(S3, [3])


@pytest.mark.parametrize("m", range(1, 6))
def test_lagrange(m):
    group = GroupSpec(m)
    for gens in subsets(group.simple_reflections()):
        order = len(subgroup_elements(group, gens))
        assert len(enumerate_cosets(group, gens)) * order == math.factorial(m)


@pytest.mark.parametrize("group", [GroupSpec(4), GroupSpec(3, (2,)), GroupSpec(2, (2, 2))])
def test_canonical_rep_matches_closure(group):
    for gens in subsets(group.simple_reflections()):
        runs = young_runs(group, gens)
        slow = closure_cosets(group, gens)
        by_rep = {}
        for w in group.elements():
            by_rep.setdefault(canonical_rep(w, runs), set()).add(w)
        assert {frozenset(v) for v in by_rep.values()} == slow


@pytest.mark.parametrize("r", range(2, 5))
def test_parabolic_description(r):
    spec = galpha_spec(r)
    group = spec.group
    for k in range(1, r):
        gens = spec.generator_sets[spec.levels.index(k)]
        expected = {s for s in permutations(range(1, r + 1)) if all(s[j] <= k for j in range(k))}
        assert subgroup_elements(group, gens) == expected


# --- reflection hypergraphs -----------------------------------------------------

def test_galpha_spec_examples():
    spec = galpha_spec(2)
    assert spec.generator_sets == (frozenset(), frozenset(), frozenset({1}))
    G = reflection_hypergraph(spec)
    assert G.num_edges == 2
    assert partite_isomorphic(G, build_G_alpha(2, ones(2)))[0]
    G = reflection_hypergraph(galpha_spec(3))
    assert G.num_edges == 6
    assert partite_isomorphic(G, build_G_alpha(3, ones(3)))[0]


@pytest.mark.parametrize("m, r", [(3, 2), (4, 2), (4, 3), (3, 1), (4, 1), (5, 2)])
def test_halpha_spec(m, r):
    alpha = [math.comb(m - k, r - k) for k in range(1, r + 1)]
    G = reflection_hypergraph(halpha_spec(m, r))
    assert partite_isomorphic(shuffled(G, m * 10 + r), build_H_alpha(m, r, alpha))[0]


@pytest.mark.parametrize("r", [1, 2, 3])
def test_halpha_degenerate(r):
    assert halpha_spec(r, r) == galpha_spec(r)


def test_halpha_r1_level0():
    # level 0 keeps one class per point of [m]
    G = reflection_hypergraph(halpha_spec(4, 1))
    assert G.class_sizes() == {0: 4, 1: 4}


@pytest.mark.parametrize("spec", [galpha_spec(3), halpha_spec(4, 2), galpha_spec(3, [1, 3]),
                                  blowup_spec(galpha_spec(2), 1, 2)])
def test_edge_count_orbit_stabilizer(spec):
    group = spec.group
    stab = set(group.elements())
    for gens in spec.generator_sets:
        stab &= subgroup_elements(group, gens)
    assert reflection_hypergraph(spec).num_edges * len(stab) == group.order


def test_dropped_levels_match_chains():
    for betas in ([1, 0, 1], [0, 1, 1], [0, 0, 1]):
        levels = [k for k, b in enumerate(betas, start=1) if b]
        G = reflection_hypergraph(galpha_spec(3, levels))
        assert G.levels == tuple([0] + levels)
        assert partite_isomorphic(G, build_G_alpha(3, betas))[0]


def test_spec_json_round_trip():
    for spec in (galpha_spec(3), halpha_spec(4, 2, [2]), blowup_spec(blowup_spec(galpha_spec(2), 1, 2), 2, 2)):
        assert ReflectionSpec.from_json(spec.to_json()) == spec
    assert galpha_spec(2).to_dict() == {"m": 2, "p": None, "generator_sets": [[], [], [1]], "levels": [0, 1, 2]}


# --- blow-ups -------------------------------------------------------------------

def test_hypergraph_blowup_examples():
    G = build_G_alpha(2, ones(2))
    assert partite_isomorphic(hypergraph_blowup(G, 1, 1), G)[0]
    B = hypergraph_blowup(G, 1, 3)
    assert B.class_sizes() == {0: 2, 1: 6, 2: 1} and B.num_edges == 3 * G.num_edges
    assert partite_isomorphic(hypergraph_blowup(G, 1, 2), build_G_alpha(2, [2, 1]))[0]


def test_blowup_spec_examples():
    spec = galpha_spec(2)
    assert blowup_spec(spec, 1, 1) == spec
    big = blowup_spec(spec, 1, 2)
    assert big.group.order == 4
    left = reflection_hypergraph(big)
    right = hypergraph_blowup(reflection_hypergraph(spec), 1, 2)
    assert partite_isomorphic(left, right)[0]
    sizes = reflection_hypergraph(spec).class_sizes()
    assert left.class_sizes() == {k: v * (2 if k == 1 else 1) for k, v in sizes.items()}


@pytest.mark.parametrize("m, r", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_iterated_blowups_reach_general_beta(m, r):
    rng = random.Random(m * 7 + r)
    for _ in range(3):
        betas = [rng.randint(0, 2) for _ in range(r - 1)] + [rng.randint(1, 2)]
        levels = [k for k, b in enumerate(betas, start=1) if b]
        spec = halpha_spec(m, r, levels)
        for k in levels:
            spec = blowup_spec(spec, k, betas[k - 1])
        alpha = [b * math.comb(m - k, r - k) for k, b in enumerate(betas, start=1)]
        assert partite_isomorphic(reflection_hypergraph(spec), build_H_alpha(m, r, alpha))[0]


# --- isomorphism ----------------------------------------------------------------

def test_isomorphism_examples():
    G = build_H_alpha(4, 2, [3, 1])
    ok, mapping = partite_isomorphic(G, G)
    assert ok
    perms = [list(range(len(c))) for c in G.classes]
    perms[1] = perms[1][::-1]
    ok, mapping = partite_isomorphic(G, G.relabelled(perms))
    assert ok
    H = G.relabelled(perms)
    image = {tuple(mapping[j][v] for j, v in enumerate(e)) for e in G.edges}
    assert image == set(H.edges)
    fewer = PartiteHypergraph(G.levels, G.classes, G.edges[1:])
    assert not partite_isomorphic(G, fewer)[0]


def test_isomorphism_detects_rewiring():
    # same class sizes, degrees and edge count but a different structure
    A = PartiteHypergraph([0, 1], [range(4), range(4)], [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
    B = PartiteHypergraph([0, 1], [range(4), range(4)], [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 0)])
    assert not partite_isomorphic(A, B)[0]
    assert partite_isomorphic(B, shuffled(B, 3))[0]


def test_isomorphism_never_permutes_levels():
    A = PartiteHypergraph([0, 1], [["a"], ["b", "c"]], [(0, 0), (0, 1)])
    B = PartiteHypergraph([0, 1], [["a", "d"], ["b"]], [(0, 0), (1, 0)])
    assert not partite_isomorphic(A, B)[0]


def test_isomorphism_cap():
    G = build_H_alpha(5, 2, [4, 1])
    with pytest.raises(IsomorphismCapError):
        partite_isomorphic(G, G, class_cap=5)
