"""Reflection hypergraphs over products of symmetric groups.

A group element is a permutation of 1..N, N = m + p_1 + ..., acting on each
factor's block of points separately.  Simple reflections are named by an
integer i and swap the points i and i+1 (both in the same factor), so for
the first factor identifier i is s_{i(i+1)} and for an extra factor starting
after point o identifier o+j is sigma_{j(j+1)}.

Subgroups generated by simple reflections are Young subgroups: they permute
points within maximal runs joined by the chosen identifiers.  A left coset
wW_k is represented by the lexicographically smallest image vector in it,
obtained by sorting w's images within each run.
"""

from __future__ import annotations

import json
import math
import sys
from collections import Counter, deque
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Mapping, Sequence

from .hypergraph import HypergraphError, PartiteHypergraph

DEFAULT_GROUP_CAP = math.factorial(10) * math.factorial(4)
DEFAULT_CLASS_CAP = 64
DEFAULT_EDGE_CAP = 10**4

Permutation = tuple[int, ...]


class GroupCapError(RuntimeError):
    pass


class IsomorphismCapError(RuntimeError):
    pass


def compose(a: Permutation, b: Permutation) -> Permutation:
    """(a b)(x) = a(b(x))."""
    return tuple(a[x - 1] for x in b)


def transposition(n: int, i: int) -> Permutation:
    img = list(range(1, n + 1))
    img[i - 1], img[i] = img[i], img[i - 1]
    return tuple(img)


@dataclass(frozen=True)
class GroupSpec:
    """S_m, optionally times commuting symmetric factors S_p (one per entry of ``extra``)."""

    m: int
    extra: tuple[int, ...] = ()

    def __post_init__(self):
        if self.m < 1 or any(p < 1 for p in self.extra):
            raise ValueError("factor degrees must be positive")
        object.__setattr__(self, "extra", tuple(int(p) for p in self.extra))

    @property
    def p(self):
        if not self.extra:
            return None
        return self.extra[0] if len(self.extra) == 1 else list(self.extra)

    @property
    def factors(self) -> tuple[int, ...]:
        return (self.m,) + self.extra

    @property
    def degree(self) -> int:
        return sum(self.factors)

    @property
    def order(self) -> int:
        return math.prod(math.factorial(d) for d in self.factors)

    def offsets(self) -> list[int]:
        out, o = [], 0
        for d in self.factors:
            out.append(o)
            o += d
        return out

    def simple_reflections(self) -> list[int]:
        out = []
        for o, d in zip(self.offsets(), self.factors):
            out.extend(range(o + 1, o + d))
        return out

    def with_factor(self, p: int) -> "GroupSpec":
        return GroupSpec(self.m, self.extra + (p,))

    def elements(self, cap: int = DEFAULT_GROUP_CAP) -> list[Permutation]:
        if self.order > cap:
            raise GroupCapError(f"group order {self.order} exceeds cap {cap}")
        blocks = [list(permutations(range(o + 1, o + d + 1))) for o, d in zip(self.offsets(), self.factors)]
        return [sum(parts, ()) for parts in product(*blocks)]


@dataclass(frozen=True)
class ReflectionSpec:
    group: GroupSpec
    generator_sets: tuple[frozenset, ...]
    levels: tuple[int, ...] = ()

    def __post_init__(self):
        sets = tuple(frozenset(int(i) for i in s) for s in self.generator_sets)
        valid = set(self.group.simple_reflections())
        for s in sets:
            bad = s - valid
            if bad:
                raise ValueError(f"{sorted(bad)} are not simple reflections of {self.group}")
        levels = tuple(self.levels) if self.levels else tuple(range(len(sets)))
        if len(levels) != len(sets):
            raise ValueError("need one level label per generator set")
        object.__setattr__(self, "generator_sets", sets)
        object.__setattr__(self, "levels", levels)

    def to_dict(self) -> dict:
        return {
            "m": self.group.m,
            "p": self.group.p,
            "generator_sets": [sorted(s) for s in self.generator_sets],
            "levels": list(self.levels),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ReflectionSpec":
        try:
            p = data.get("p")
            extra = () if p is None else tuple(p) if isinstance(p, list) else (int(p),)
            return cls(GroupSpec(int(data["m"]), extra),
                       tuple(frozenset(s) for s in data["generator_sets"]),
                       tuple(data.get("levels") or ()))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed reflection spec: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ReflectionSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, order=True)
class Coset:
    rep: Permutation
    subgroup: int


def young_runs(group: GroupSpec, gens: Iterable[int]) -> list[tuple[int, int]]:
    """Maximal runs [a, b] of points permuted by the subgroup generated by ``gens``."""
    gens = set(gens)
    runs, start = [], 1
    for x in range(1, group.degree + 1):
        if x not in gens:
            runs.append((start, x))
            start = x + 1
    return runs


def canonical_rep(w: Permutation, runs: Sequence[tuple[int, int]]) -> Permutation:
    out = []
    for a, b in runs:
        out.extend(sorted(w[a - 1:b]))
    return tuple(out)


def subgroup_elements(group: GroupSpec, gens: Iterable[int], cap: int = DEFAULT_GROUP_CAP) -> set[Permutation]:
    """Closure of the generators under composition (breadth-first)."""
    n = group.degree
    ident = tuple(range(1, n + 1))
    tr = [transposition(n, i) for i in sorted(set(gens))]
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for t in tr:
            h = compose(g, t)
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    raise GroupCapError(f"subgroup larger than cap {cap}")
                queue.append(h)
    return seen


def enumerate_cosets(group: GroupSpec, gens: Iterable[int], subgroup: int = 0,
                     cap: int = DEFAULT_GROUP_CAP) -> list[Coset]:
    """All left cosets wW_k, sorted by canonical representative."""
    gens = set(gens)
    bad = gens - set(group.simple_reflections())
    if bad:
        raise ValueError(f"{sorted(bad)} are not simple reflections")
    runs = young_runs(group, gens)
    reps = {canonical_rep(w, runs) for w in group.elements(cap)}
    return [Coset(rep, subgroup) for rep in sorted(reps)]


def reflection_hypergraph(spec: ReflectionSpec, cap: int = DEFAULT_GROUP_CAP) -> PartiteHypergraph:
    """Classes are the cosets of each W_k; one edge (wW_0, ..., wW_r) per group element w."""
    group = spec.group
    elems = group.elements(cap)
    runs = [young_runs(group, s) for s in spec.generator_sets]
    classes, index = [], []
    for rn in runs:
        reps = sorted({canonical_rep(w, rn) for w in elems})
        classes.append(reps)
        index.append({rep: i for i, rep in enumerate(reps)})
    edges = {tuple(index[j][canonical_rep(w, rn)] for j, rn in enumerate(runs)) for w in elems}
    return PartiteHypergraph(spec.levels, classes, edges)


def galpha_spec(r: int, levels: Sequence[int] | None = None) -> ReflectionSpec:
    """Generator data whose reflection hypergraph is the single-host chain hypergraph (beta in {0,1}).

    Over S_r with T = {s_12, ..., s_(r-1)r}: T_0 = T_1, T_i = T minus s_i(i+1)
    for 1 <= i < r, and T_r = T.  ``levels`` lists the present levels k >= 1
    (default all of 1..r); absent levels are deleted.
    """
    if r < 1:
        raise ValueError("r must be positive")
    T = set(range(1, r))
    sets = {k: T - {k} for k in range(1, r)}
    sets[r] = set(T)
    sets[0] = set(sets[1])
    keep = _levels(r, levels)
    return ReflectionSpec(GroupSpec(r), tuple(frozenset(sets[k]) for k in [0] + keep), tuple([0] + keep))


def halpha_spec(m: int, r: int, levels: Sequence[int] | None = None) -> ReflectionSpec:
    """Generator data over S_m for the chain hypergraph over all r-subsets of [m] (beta in {0,1})."""
    if not 1 <= r <= m:
        raise ValueError(f"need 1 <= r <= m, got m={m}, r={r}")
    base = galpha_spec(r, levels)
    low = set(range(r, m))
    high = set(range(r + 1, m))
    # level 0 must stabilise the point 1; for r = 1 the union T_0 | low would contain s_12
    sets = [(set(base.generator_sets[0]) | low) - {1}]
    sets += [set(s) | high for s in base.generator_sets[1:]]
    return ReflectionSpec(GroupSpec(m), tuple(frozenset(s) for s in sets), base.levels)


def _levels(r: int, levels) -> list[int]:
    keep = list(range(1, r + 1)) if levels is None else sorted(set(levels))
    if not keep or keep[-1] != r or keep[0] < 1:
        raise ValueError(f"present levels must lie in 1..{r} and include {r}")
    return keep


def hypergraph_blowup(G: PartiteHypergraph, level: int, p: int) -> PartiteHypergraph:
    """p copies of G glued along every class except the one at ``level``."""
    if p < 1:
        raise ValueError("blow-up factor must be positive")
    j = G.position(level)
    classes = list(G.classes)
    classes[j] = [(lab, c) for lab in G.classes[j] for c in range(1, p + 1)]
    edges = []
    for e in G.edges:
        for c in range(p):
            f = list(e)
            f[j] = e[j] * p + c
            edges.append(tuple(f))
    return PartiteHypergraph(G.levels, classes, edges)


def blowup_spec(spec: ReflectionSpec, level: int, p: int) -> ReflectionSpec:
    """Spec over W x S_p whose reflection hypergraph is the p-fold blow-up at ``level``.

    The new reflections P = {sigma_12, ..., sigma_(p-1)p} join every generator
    set, except that sigma_12 is left out at the blown-up level.
    """
    if p < 1:
        raise ValueError("blow-up factor must be positive")
    if level not in spec.levels:
        raise HypergraphError(f"level {level} not present in {spec.levels}")
    if p == 1:
        return spec
    offset = spec.group.degree
    P = set(range(offset + 1, offset + p))
    sets = []
    for lvl, s in zip(spec.levels, spec.generator_sets):
        sets.append(frozenset(set(s) | (P - {offset + 1} if lvl == level else P)))
    return ReflectionSpec(spec.group.with_factor(p), tuple(sets), spec.levels)


# ---------------------------------------------------------------------------
# isomorphism of partite hypergraphs (levels are never permuted)


def _refine_colours(graphs: Sequence[PartiteHypergraph]) -> list[list[list[int]]]:
    """Joint colour refinement; colours[g][j][v] for vertex v of class j in graph g."""
    colours = [[[j] * len(c) for j, c in enumerate(G.classes)] for G in graphs]
    n_colours = len({x for cg in colours for cj in cg for x in cj})
    while True:
        sigs = []
        for G, cg in zip(graphs, colours):
            acc = [[[] for _ in c] for c in G.classes]
            for e in G.edges:
                ec = tuple(cg[j][i] for j, i in enumerate(e))
                for j, i in enumerate(e):
                    acc[j][i].append(ec)
            sigs.append([[(cg[j][v], tuple(sorted(acc[j][v]))) for v in range(len(c))]
                         for j, c in enumerate(G.classes)])
        palette = {s: n for n, s in enumerate(sorted({s for sg in sigs for sj in sg for s in sj}))}
        colours = [[[palette[s] for s in sj] for sj in sg] for sg in sigs]
        if len(palette) == n_colours:
            return colours
        n_colours = len(palette)


def _codegrees(G: PartiteHypergraph) -> dict:
    co: dict = {}
    for e in G.edges:
        vs = list(enumerate(e))
        for a in vs:
            d = co.setdefault(a, Counter())
            for b in vs:
                if b != a:
                    d[b] += 1
    return co


def partite_isomorphic(G1: PartiteHypergraph, G2: PartiteHypergraph,
                       class_cap: int = DEFAULT_CLASS_CAP, edge_cap: int = DEFAULT_EDGE_CAP):
    """Search for a level-preserving bijection carrying the edges of G1 onto those of G2.

    Returns ``(True, mapping)`` with ``mapping[j][v]`` the image of vertex v of
    class j, or ``(False, None)``.
    """
    for G in (G1, G2):
        if any(len(c) > class_cap for c in G.classes) or G.num_edges > edge_cap:
            raise IsomorphismCapError("hypergraph exceeds the isomorphism search cap")
    if G1.levels != G2.levels:
        return False, None
    if [len(c) for c in G1.classes] != [len(c) for c in G2.classes] or G1.num_edges != G2.num_edges:
        return False, None

    c1, c2 = _refine_colours([G1, G2])
    for j in range(len(G1.classes)):
        if Counter(c1[j]) != Counter(c2[j]):
            return False, None

    co1, co2 = _codegrees(G1), _codegrees(G2)
    edges2 = set(G2.edges)
    edges_at: dict = {}
    for e in G1.edges:
        for j, i in enumerate(e):
            edges_at.setdefault((j, i), []).append(e)

    # order vertices so each one is tied to many earlier ones
    verts = [(j, v) for j, c in enumerate(G1.classes) for v in range(len(c))]
    colour_size = Counter((j, c1[j][v]) for j, v in verts)
    order, placed = [], set()
    score = Counter()
    while len(order) < len(verts):
        rest = [u for u in verts if u not in placed]
        u = max(rest, key=lambda x: (score[x], -colour_size[(x[0], c1[x[0]][x[1]])], -x[0], -x[1]))
        order.append(u)
        placed.add(u)
        for w, k in co1.get(u, {}).items():
            score[w] += k

    by_colour: dict = {}
    for j, cj in enumerate(c2):
        for v, col in enumerate(cj):
            by_colour.setdefault((j, col), []).append((j, v))

    phi: dict = {}
    used: set = set()

    def consistent(u, u2) -> bool:
        n1, n2 = co1.get(u, {}), co2.get(u2, {})
        for w, k in n1.items():
            if w in phi and n2.get(phi[w], 0) != k:
                return False
        for w in n2:
            if w in used and n1.get(_inverse[w], 0) != n2[w]:
                return False
        for e in edges_at.get(u, ()):
            img = []
            for j, i in enumerate(e):
                x = (j, i)
                if x == u:
                    img.append(u2[1])
                elif x in phi:
                    img.append(phi[x][1])
                else:
                    break
            else:
                if tuple(img) not in edges2:
                    return False
        return True

    _inverse: dict = {}

    def search(pos: int) -> bool:
        if pos == len(order):
            return True
        u = order[pos]
        for u2 in by_colour.get((u[0], c1[u[0]][u[1]]), ()):
            if u2 in used or not consistent(u, u2):
                continue
            phi[u], _inverse[u2] = u2, u
            used.add(u2)
            if search(pos + 1):
                return True
            del phi[u], _inverse[u2]
            used.discard(u2)
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, len(order) + 100))
    try:
        found = search(0)
    finally:
        sys.setrecursionlimit(limit)
    if not found:
        return False, None
    mapping = [[0] * len(c) for c in G1.classes]
    for (j, v), (_, v2) in phi.items():
        mapping[j][v] = v2
    return True, mapping
