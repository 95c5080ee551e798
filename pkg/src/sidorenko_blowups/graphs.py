"""Bipartite graphs with a distinguished side A = [m].

A graph is stored as the size of A together with the multiset of
neighbourhoods of the B-vertices.  Neighbourhoods are sorted tuples of
1-based A-indices and the multiset is kept in lexicographic order, so two
graphs compare equal iff they agree up to reordering of B.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence


class GraphError(ValueError):
    """Raised for malformed graphs or out-of-range constructor arguments."""


@dataclass(frozen=True)
class BipartiteGraph:
    a_size: int
    b_neighborhoods: tuple[tuple[int, ...], ...]

    def __init__(self, a_size: int, b_neighborhoods: Iterable[Iterable[int]] = ()):
        if a_size < 0:
            raise GraphError(f"a_size must be nonnegative, got {a_size}")
        nbhds = []
        for nb in b_neighborhoods:
            s = tuple(sorted(nb))
            if len(set(s)) != len(s):
                raise GraphError(f"repeated vertex in neighbourhood {s}")
            if s and (s[0] < 1 or s[-1] > a_size):
                raise GraphError(f"neighbourhood {s} not contained in [1..{a_size}]")
            nbhds.append(s)
        object.__setattr__(self, "a_size", int(a_size))
        object.__setattr__(self, "b_neighborhoods", tuple(sorted(nbhds)))

    @property
    def b_size(self) -> int:
        return len(self.b_neighborhoods)

    @property
    def num_vertices(self) -> int:
        return self.a_size + self.b_size

    @property
    def num_edges(self) -> int:
        return sum(len(nb) for nb in self.b_neighborhoods)

    @property
    def max_degree(self) -> int:
        """Largest degree of a B-vertex (0 if B is empty)."""
        return max((len(nb) for nb in self.b_neighborhoods), default=0)

    def neighborhood_counts(self) -> Counter:
        """Multiplicity of each neighbourhood, i.e. the numbers c_I."""
        return Counter(self.b_neighborhoods)

    def a_degrees(self) -> list[int]:
        deg = [0] * self.a_size
        for nb in self.b_neighborhoods:
            for a in nb:
                deg[a - 1] += 1
        return deg

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (a, b) pairs, a 1-based in A and b a 0-based B index."""
        return [(a, b) for b, nb in enumerate(self.b_neighborhoods) for a in nb]

    def to_dict(self) -> dict:
        return {"a_size": self.a_size, "b_neighborhoods": [list(nb) for nb in self.b_neighborhoods]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "BipartiteGraph":
        try:
            return cls(int(data["a_size"]), [[int(a) for a in nb] for nb in data["b_neighborhoods"]])
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph document: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "BipartiteGraph":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class DegreeProfile:
    counts: dict[int, int]
    max_degree: int

    def __getitem__(self, k: int) -> int:
        return self.counts.get(k, 0)


class WeightVector:
    """Nonnegative rational weights indexed by B-degree; missing keys read as 0."""

    def __init__(self, weights: Mapping[int, object] | Sequence[object] = ()):
        if isinstance(weights, Mapping):
            items = weights.items()
        else:
            items = enumerate(weights, start=1)
        w = {}
        for k, v in items:
            v = Fraction(v)
            if v < 0:
                raise GraphError(f"negative weight {v} at degree {k}")
            w[int(k)] = v
        self.weights = dict(sorted(w.items()))

    def __getitem__(self, k: int) -> Fraction:
        return self.weights.get(k, Fraction(0))

    def __iter__(self):
        return iter(self.weights)

    def items(self):
        return self.weights.items()

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightVector):
            return NotImplemented
        nz = lambda d: {k: v for k, v in d.items() if v}
        return nz(self.weights) == nz(other.weights)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in self.weights.items())
        return f"WeightVector({{{body}}})"

    @property
    def integer_valued(self) -> bool:
        return all(v.denominator == 1 for v in self.weights.values())

    @property
    def support(self) -> list[int]:
        return [k for k, v in self.weights.items() if v > 0]


def as_weights(alpha) -> WeightVector:
    return alpha if isinstance(alpha, WeightVector) else WeightVector(alpha)


def _check_mr(m: int, r: int) -> None:
    if m < 1:
        raise GraphError(f"m must be positive, got {m}")
    if not 1 <= r <= m:
        raise GraphError(f"r must satisfy 1 <= r <= m={m}, got {r}")


def make_mr_incidence(m: int, r: int) -> BipartiteGraph:
    """Incidence graph between [m] and all r-subsets of [m]."""
    _check_mr(m, r)
    return BipartiteGraph(m, combinations(range(1, m + 1), r))


def make_downset(m: int, r: int) -> BipartiteGraph:
    """Incidence graph between [m] and all nonempty subsets of size at most r."""
    _check_mr(m, r)
    return BipartiteGraph(m, (s for k in range(1, r + 1) for s in combinations(range(1, m + 1), k)))


def make_mobius() -> BipartiteGraph:
    """K_{5,5} minus a 10-cycle; B-vertex i sees i-1, i, i+1 modulo 5."""
    return BipartiteGraph(5, ([(i - 1) % 5 + 1, i % 5 + 1, (i + 1) % 5 + 1] for i in range(5)))


def make_complete_bipartite(a: int, b: int) -> BipartiteGraph:
    return BipartiteGraph(a, [range(1, a + 1)] * b)


def make_even_cycle(half: int) -> BipartiteGraph:
    """C_{2*half} with A the even positions."""
    if half < 2:
        raise GraphError("an even cycle needs half >= 2")
    return BipartiteGraph(half, ([i + 1, (i + 1) % half + 1] for i in range(half)))


def blow_up(H: BipartiteGraph, p: int) -> BipartiteGraph:
    """Replace every B-vertex by p clones with the same neighbourhood."""
    if p < 1:
        raise GraphError(f"blow-up exponent must be positive, got {p}")
    return BipartiteGraph(H.a_size, (nb for nb in H.b_neighborhoods for _ in range(p)))


def disjoint_union(H: BipartiteGraph, H2: BipartiteGraph) -> BipartiteGraph:
    shift = H.a_size
    shifted = (tuple(a + shift for a in nb) for nb in H2.b_neighborhoods)
    return BipartiteGraph(H.a_size + H2.a_size, list(H.b_neighborhoods) + list(shifted))


def degree_profile(H: BipartiteGraph) -> DegreeProfile:
    if not H.b_neighborhoods:
        raise GraphError("degree profile needs a nonempty B side")
    counts = Counter(len(nb) for nb in H.b_neighborhoods)
    return DegreeProfile(dict(sorted(counts.items())), max(counts))


def theorem1_applies(H: BipartiteGraph) -> tuple[bool, list[tuple[int, int, int, bool]]]:
    """Divisibility test: C(m, r) * C(r, k) must divide d_k for every 1 <= k <= r.

    Returns the verdict and one witness ``(k, modulus, d_k, ok)`` per degree.
    """
    prof = degree_profile(H)
    m, r = H.a_size, prof.max_degree
    witnesses = []
    for k in range(1, r + 1):
        modulus = math.comb(m, r) * math.comb(r, k)
        d = prof[k]
        witnesses.append((k, modulus, d, d % modulus == 0))
    return all(w[3] for w in witnesses), witnesses


def minimal_blowup_exponent(H: BipartiteGraph) -> int:
    """Least p such that the p-fold blow-up passes the divisibility test."""
    prof = degree_profile(H)
    m, r = H.a_size, prof.max_degree
    p = 1
    for k in range(1, r + 1):
        d = prof[k]
        if d:
            modulus = math.comb(m, r) * math.comb(r, k)
            p = math.lcm(p, modulus // math.gcd(modulus, d))
    return p


def companion_graph(H: BipartiteGraph) -> BipartiteGraph:
    """Graph H' on r left vertices whose disjoint union with H passes the divisibility test.

    For each k it has ceil(d_k / (m+r)!) (m+r)! - d_k vertices of degree k,
    each adjacent to the first k left vertices.  B' may be empty.
    """
    prof = degree_profile(H)
    m, r = H.a_size, prof.max_degree
    block = math.factorial(m + r)
    nbhds = []
    for k in range(1, r + 1):
        d = prof[k]
        deficit = -(-d // block) * block - d
        nbhds.extend([tuple(range(1, k + 1))] * deficit)
    return BipartiteGraph(r, nbhds)


def alpha_profile(H: BipartiteGraph) -> WeightVector:
    """Symmetric weights alpha_k = d_k / C(m, k) for 1 <= k <= r."""
    prof = degree_profile(H)
    m = H.a_size
    return WeightVector({k: Fraction(prof[k], math.comb(m, k)) for k in range(1, prof.max_degree + 1)})


def weighted_edge_count(H: BipartiteGraph, alpha) -> Fraction:
    """e_alpha(H): sum over B-vertices of alpha_{deg(v)} deg(v)."""
    alpha = as_weights(alpha)
    return sum((alpha[len(nb)] * len(nb) for nb in H.b_neighborhoods), Fraction(0))
