"""Chain hypergraphs built from the downset graph and their product kernels.

For an r-set F, level k >= 1 holds beta_k labelled copies of every k-subset
of F and level 0 holds the elements of F (shared between host sets).  An
edge is a choice of one vertex per present level whose subsets are nested,
starting from the singleton of the level-0 element.  Taking all r-subsets F
of [m] as hosts gives the big hypergraph; taking the single host [r] gives
the small one.

The product kernel pairs the level-0 variable with every other coordinate:
``K(x, z_1, ..., z_r) = prod_k W(x, z_k)^{q_k}``, with the exponents chosen
so that after expanding the hypergraph density every pair (i, v) with
``i in subset(v)`` carries total exponent exactly 1.
"""

from __future__ import annotations

import json
import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from typing import Mapping, NamedTuple, Sequence

import mpmath

from .arith import (
    DEFAULT_PRECISION_BITS,
    DEFAULT_TERM_CAP,
    ExactnessError,
    check_cap,
    check_mode,
    exact_power,
    float_power,
    to_mpf,
)
from .graphon import GraphonError, StepGraphon
from .graphs import as_weights
from .hypergraph import HypergraphError, PartiteHypergraph


class ChainVertexLabel(NamedTuple):
    level: int
    host: tuple[int, ...]
    subset: tuple[int, ...]
    copy: int


class DivisibilityError(ValueError):
    """alpha_k is not a nonnegative integer multiple of C(m-k, r-k)."""

    def __init__(self, message: str, offending: Sequence[int] = ()):
        super().__init__(message)
        self.offending = list(offending)


def chain_betas(m: int, r: int, alpha) -> dict[int, int]:
    """beta_k = alpha_k / C(m-k, r-k) for k = 1..r; all must be nonnegative integers, beta_r >= 1."""
    if m < 1 or not 1 <= r <= m:
        raise ValueError(f"need 1 <= r <= m, got m={m}, r={r}")
    alpha = as_weights(alpha)
    extra = [k for k in alpha if alpha[k] and not 1 <= k <= r]
    if extra:
        raise DivisibilityError(f"weights given for degrees outside 1..{r}: {extra}", extra)
    betas, bad = {}, []
    for k in range(1, r + 1):
        b = alpha[k] / math.comb(m - k, r - k)
        if b.denominator != 1:
            bad.append(k)
        else:
            betas[k] = int(b)
    if bad:
        raise DivisibilityError(
            "C(m-k, r-k) does not divide alpha_k for k in " + ", ".join(map(str, bad)), bad)
    if betas[r] < 1:
        raise DivisibilityError(f"alpha_{r} must be positive", [r])
    return betas


def present_levels(betas: Mapping[int, int]) -> list[int]:
    return [k for k in sorted(betas) if betas[k] > 0]


def _between(lo: int, hi: int, sizes: Sequence[int]) -> int:
    """Number of chains from a fixed lo-set to a fixed hi-superset using one set per size in ``sizes``."""
    steps = [lo] + [s for s in sizes if lo < s < hi] + [hi]
    out = math.factorial(hi - lo)
    for a, b in zip(steps, steps[1:]):
        out //= math.factorial(b - a)
    return out


def chain_pair_count(r: int, betas: Mapping[int, int], k: int) -> int:
    """Edges through a fixed level-0 element i and a fixed level-k vertex v with i in subset(v)."""
    levels = present_levels(betas)
    others = 1
    for j in levels:
        if j != k:
            others *= betas[j]
    return _between(1, k, levels) * _between(k, r, levels) * others


def closed_form_exponent(r: int, betas: Mapping[int, int], k: int) -> Fraction:
    """beta_k / (beta (k-1)! (r-k)!), beta the product over present levels."""
    beta = math.prod(betas[j] for j in present_levels(betas))
    return Fraction(betas[k], beta * math.factorial(k - 1) * math.factorial(r - k))


def chain_exponents(r: int, betas: Mapping[int, int]) -> dict[int, Fraction]:
    """q_k = 1 / chain_pair_count; agrees with :func:`closed_form_exponent` unless a level in 2..r-1 is absent."""
    return {k: Fraction(1, chain_pair_count(r, betas, k)) for k in present_levels(betas)}


def _build(m: int, r: int, betas: Mapping[int, int]) -> PartiteHypergraph:
    levels = present_levels(betas)
    hosts = list(combinations(range(1, m + 1), r))
    classes = [list(range(1, m + 1))]
    index = [{i: i - 1 for i in range(1, m + 1)}]
    for k in levels:
        labs = [ChainVertexLabel(k, F, S, j)
                for F in hosts for S in combinations(F, k) for j in range(1, betas[k] + 1)]
        classes.append(labs)
        index.append({lab: n for n, lab in enumerate(labs)})

    edges = []
    desc = levels[::-1]
    for F in hosts:
        # chains of subsets, top level first (the top subset is F itself)
        chains = [[F]]
        for k in desc[1:]:
            chains = [c + [S] for c in chains for S in combinations(c[-1], k)]
        for c in chains:
            subsets = c[::-1]
            for i in subsets[0]:
                for copies in product(*(range(1, betas[k] + 1) for k in levels)):
                    e = [index[0][i]]
                    for pos, (k, S, j) in enumerate(zip(levels, subsets, copies), start=1):
                        e.append(index[pos][ChainVertexLabel(k, F, S, j)])
                    edges.append(tuple(e))
    return PartiteHypergraph([0] + levels, classes, edges)


def build_H_alpha(m: int, r: int, alpha) -> PartiteHypergraph:
    """Chains over every r-subset of [m]; beta_k = alpha_k / C(m-k, r-k)."""
    return _build(m, r, chain_betas(m, r, alpha))


def build_G_alpha(r: int, beta) -> PartiteHypergraph:
    """Chains over the single host set [r], with beta_k copies at level k."""
    return _build(r, r, chain_betas(r, r, beta))


def host_copy(H: PartiteHypergraph, F: Sequence[int]) -> PartiteHypergraph:
    """Sub-hypergraph of a chain hypergraph induced on the vertices belonging to host F."""
    F = tuple(sorted(F))
    keep = {0: F}
    for lvl, cls in zip(H.levels[1:], H.classes[1:]):
        keep[lvl] = [lab for lab in cls if lab.host == F]
    return H.induced(keep)


def pair_incidence_counts(G: PartiteHypergraph) -> Counter:
    """Counter over (level-0 index, level, vertex index) of edges containing both vertices."""
    if not G.levels or G.levels[0] != 0:
        raise HypergraphError("hypergraph needs level 0 as its first class")
    c = Counter()
    for e in G.edges:
        for pos in range(1, len(G.levels)):
            c[(e[0], G.levels[pos], e[pos])] += 1
    return c


@dataclass(frozen=True)
class ProductKernel:
    """K(x, z_k : k in levels) = prod_k base(x, z_k)^{exponents[k]}."""

    base: StepGraphon
    exponents: dict[int, Fraction]

    def __init__(self, base: StepGraphon, exponents: Mapping[int, object]):
        exps = {int(k): Fraction(v) for k, v in exponents.items()}
        if any(v < 0 for v in exps.values()):
            raise ValueError("kernel exponents must be nonnegative")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exponents", dict(sorted(exps.items())))

    @property
    def exponent_denominator(self) -> int:
        return reduce(math.lcm, (q.denominator for q in self.exponents.values()), 1)

    def to_dict(self) -> dict:
        d = self.base.to_dict()
        d["levels"] = list(self.exponents)
        d["exponents"] = [str(q) for q in self.exponents.values()]
        return d

    @classmethod
    def from_dict(cls, data: Mapping) -> "ProductKernel":
        base = StepGraphon.from_dict(data)
        exps = [Fraction(str(q)) for q in data["exponents"]]
        levels = data.get("levels") or list(range(1, len(exps) + 1))
        return cls(base, dict(zip(levels, exps)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ProductKernel":
        return cls.from_dict(json.loads(text))


def product_kernel(W: StepGraphon, m: int, r: int, alpha) -> ProductKernel:
    betas = chain_betas(m, r, alpha)
    return ProductKernel(W, chain_exponents(r, betas))


@dataclass(frozen=True)
class StepKernel:
    """Nonnegative t-ary step function; every coordinate uses the same blocks.

    ``values`` is a dict from block-index tuples of length ``arity`` to rationals.
    """

    arity: int
    weights: tuple[Fraction, ...]
    values: dict[tuple[int, ...], Fraction]

    def __init__(self, arity: int, weights: Sequence, values: Mapping[tuple[int, ...], object]):
        w = tuple(Fraction(x) for x in weights)
        if not w or any(x <= 0 for x in w) or sum(w) != 1:
            raise GraphonError("kernel weights must be positive and sum to 1")
        n = len(w)
        vals = {}
        for idx in product(range(n), repeat=arity):
            v = Fraction(values[idx])
            if not 0 <= v <= 1:
                raise GraphonError(f"kernel value {v} at {idx} outside [0,1]")
            vals[idx] = v
        object.__setattr__(self, "arity", int(arity))
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "values", vals)

    @property
    def block_count(self) -> int:
        return len(self.weights)


def random_step_kernel(seed: int, arity: int, max_blocks: int = 2, denominator_bound: int = 6) -> StepKernel:
    rng = random.Random(seed)
    n = rng.randint(1, max_blocks)
    raw = [Fraction(rng.randint(1, denominator_bound), rng.randint(1, denominator_bound)) for _ in range(n)]
    weights = [w / sum(raw) for w in raw]
    values = {}
    for idx in product(range(n), repeat=arity):
        q = rng.randint(1, denominator_bound)
        values[idx] = Fraction(rng.randint(0, q), q)
    return StepKernel(arity, weights, values)


def materialize(K: ProductKernel, levels: Sequence[int]) -> StepKernel:
    """Tabulate a product kernel as a step kernel over (level 0, *levels); needs rational powers."""
    W = K.base
    n = W.block_count
    vals = {}
    for idx in product(range(n), repeat=len(levels) + 1):
        v = Fraction(1)
        for k, z in zip(levels, idx[1:]):
            p = exact_power(W.values[idx[0]][z], K.exponents[k])
            if p is None:
                raise ExactnessError("product kernel has irrational values on this graphon")
            v *= p
        vals[idx] = v
    return StepKernel(len(levels) + 1, W.weights, vals)


def _power(base: Fraction, e: Fraction, exact: bool, prec: int, cache: dict):
    key = (base, e)
    v = cache.get(key)
    if v is None:
        if exact:
            v = exact_power(base, e)
            if v is None:
                raise ExactnessError(f"{base}^{e} is irrational")
        else:
            v = float_power(base, e, prec)
        cache[key] = v
    return v


def _exponents_exact(K: ProductKernel, G: PartiteHypergraph, mode: str, per_edge: bool) -> bool:
    """Whether every power needed is rational on K's base graphon."""
    check_mode(mode)
    if mode == "float":
        return False
    vals = {x for row in K.base.values for x in row}
    if per_edge:
        exps = {K.exponents[k] for k in G.levels[1:]}
    else:
        exps = {K.exponents[lvl] * c for (_, lvl, _), c in pair_incidence_counts(G).items()}
    ok = all(e.denominator == 1 or exact_power(v, e) is not None for v in vals for e in exps)
    if not ok and mode == "exact":
        raise ExactnessError("some kernel power is irrational; use power-compatible graphon values")
    return ok


def _check_kernel_levels(G: PartiteHypergraph, K: ProductKernel) -> None:
    if not G.levels or G.levels[0] != 0:
        raise HypergraphError("hypergraph needs level 0 as its first class")
    missing = [lvl for lvl in G.levels[1:] if lvl not in K.exponents]
    if missing:
        raise HypergraphError(f"kernel has no exponent for levels {missing}")


def hyper_density_structured(G: PartiteHypergraph, K: ProductKernel, mode: str = "auto",
                             prec: int = DEFAULT_PRECISION_BITS, cap: int = DEFAULT_TERM_CAP):
    """Density of G in a product kernel, integrating each non-root vertex out given the roots.

    Given the level-0 blocks x, the other variables are independent, and
    vertex v contributes E_z prod_i W(x_i, z)^{q * c(i, v)} where c(i, v)
    counts the edges through i and v.
    """
    _check_kernel_levels(G, K)
    W = K.base
    n = W.block_count
    m0 = len(G.classes[0])
    check_cap(n**m0 * max(1, G.num_vertices), cap, "structured hypergraph density")
    exact = _exponents_exact(K, G, mode, per_edge=False)

    sigs: dict[tuple[int, int], list[tuple[int, Fraction]]] = {}
    for (i, lvl, v), c in pair_incidence_counts(G).items():
        sigs.setdefault((lvl, v), []).append((i, K.exponents[lvl] * c))
    # vertices outside every edge integrate to 1 and are skipped
    sig_counts = Counter(tuple(sorted(s)) for s in sigs.values())

    pcache: dict = {}
    one = Fraction(1) if exact else mpmath.mpf(1)
    with mpmath.workprec(prec):
        weights = list(W.weights) if exact else [to_mpf(w, prec) for w in W.weights]
        terms = []
        for x in product(range(n), repeat=m0):
            term = one
            for i in x:
                term *= weights[i]
            for sig, mult in sig_counts.items():
                s = 0 if exact else mpmath.mpf(0)
                for z in range(n):
                    t = weights[z]
                    for i, e in sig:
                        t *= _power(W.values[x[i]][z], e, exact, prec, pcache)
                        if not t:
                            break
                    s += t
                term *= s**mult
                if not term:
                    break
            terms.append(term)
        return sum(terms, Fraction(0)) if exact else mpmath.fsum(terms)


def hyper_density_oracle(G: PartiteHypergraph, K, mode: str = "auto",
                         prec: int = DEFAULT_PRECISION_BITS, cap: int = DEFAULT_TERM_CAP):
    """Literal sum over block assignments of every vertex of G.

    ``K`` is a :class:`StepKernel` (coordinates in level order) or a
    :class:`ProductKernel` (each edge factor evaluated as a product of powers).
    """
    sizes = [len(c) for c in G.classes]
    offsets = [sum(sizes[:j]) for j in range(len(sizes))]
    total_vertices = sum(sizes)
    if isinstance(K, StepKernel):
        if K.arity != len(G.levels):
            raise HypergraphError(f"kernel arity {K.arity} != number of levels {len(G.levels)}")
        n, weights, exact = K.block_count, K.weights, True
        if mode == "float":
            exact = False

        def factor(blocks):
            return K.values[blocks]
    else:
        _check_kernel_levels(G, K)
        W = K.base
        n, weights = W.block_count, W.weights
        exact = _exponents_exact(K, G, mode, per_edge=True)
        pcache: dict = {}
        lvl_exps = [K.exponents[lvl] for lvl in G.levels[1:]]

        def factor(blocks):
            out = 1
            x = blocks[0]
            for e, z in zip(lvl_exps, blocks[1:]):
                out *= _power(W.values[x][z], e, exact, prec, pcache)
            return out

    check_cap(n**total_vertices * max(1, G.num_edges), cap, "naive hypergraph oracle")
    flat_edges = [tuple(offsets[j] + i for j, i in enumerate(e)) for e in G.edges]
    with mpmath.workprec(prec):
        ws = list(weights) if exact else [to_mpf(w, prec) for w in weights]
        terms = []
        for xs in product(range(n), repeat=total_vertices):
            term = Fraction(1) if exact else mpmath.mpf(1)
            for v in xs:
                term *= ws[v]
            for fe in flat_edges:
                f = factor(tuple(xs[v] for v in fe))
                term *= f if exact else to_mpf(f, prec)
                if not term:
                    break
            terms.append(term)
        return sum(terms, Fraction(0)) if exact else mpmath.fsum(terms)


def hyper_density(G: PartiteHypergraph, K, mode: str = "auto",
                  prec: int = DEFAULT_PRECISION_BITS, cap: int = DEFAULT_TERM_CAP):
    """Structured evaluation for product kernels, literal sum for general step kernels."""
    if isinstance(K, ProductKernel):
        return hyper_density_structured(G, K, mode, prec, cap)
    return hyper_density_oracle(G, K, mode, prec, cap)


def weak_norming_sides(G: PartiteHypergraph, Gsub: PartiteHypergraph, K, mode: str = "auto",
                       prec: int = DEFAULT_PRECISION_BITS, cap: int = DEFAULT_TERM_CAP):
    """(t_G(K), t_Gsub(K)^{e(G)/e(Gsub)})."""
    if Gsub.num_edges < 1:
        raise HypergraphError("sub-hypergraph needs at least one edge")
    lhs = hyper_density(G, K, mode, prec, cap)
    sub = hyper_density(Gsub, K, mode, prec, cap)
    ratio = Fraction(G.num_edges, Gsub.num_edges)
    if isinstance(sub, Fraction) and isinstance(lhs, Fraction):
        rhs = exact_power(sub, ratio)
        if rhs is not None:
            return lhs, rhs
        if mode == "exact":
            raise ExactnessError(f"exponent {ratio} gives an irrational right-hand side")
    return lhs, float_power(sub, ratio, prec)


def weak_norming_margin(G: PartiteHypergraph, Gsub: PartiteHypergraph, K, mode: str = "auto",
                        prec: int = DEFAULT_PRECISION_BITS, cap: int = DEFAULT_TERM_CAP):
    """t_G(K) - t_Gsub(K)^{e(G)/e(Gsub)}; nonnegative when G is weakly norming."""
    lhs, rhs = weak_norming_sides(G, Gsub, K, mode, prec, cap)
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return lhs - rhs
    with mpmath.workprec(prec):
        return to_mpf(lhs, prec) - to_mpf(rhs, prec)
