"""Step graphons and homomorphism densities of bipartite graphs in them.

The main evaluator integrates out the B side first: for a fixed block
assignment x of A every B-vertex v contributes the factor rho(x_{N(v)}),
so t_H(W) is a weighted sum over n^m assignments.  Exact evaluation runs on
integer numerators over a common denominator and only builds a Fraction at
the end.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Mapping, Sequence

import mpmath

from .arith import (
    DEFAULT_PRECISION_BITS,
    DEFAULT_TERM_CAP,
    ExactnessError,
    check_cap,
    check_mode,
    to_mpf,
)
from .graphs import BipartiteGraph, as_weights


class GraphonError(ValueError):
    pass


@dataclass(frozen=True)
class StepGraphon:
    weights: tuple[Fraction, ...]
    values: tuple[tuple[Fraction, ...], ...]

    def __init__(self, weights: Sequence, values: Sequence[Sequence]):
        w = tuple(Fraction(x) for x in weights)
        v = tuple(tuple(Fraction(x) for x in row) for row in values)
        n = len(w)
        if n == 0:
            raise GraphonError("a step graphon needs at least one block")
        if any(x <= 0 for x in w):
            raise GraphonError("block weights must be positive")
        if sum(w) != 1:
            raise GraphonError(f"block weights sum to {sum(w)}, not 1")
        if len(v) != n or any(len(row) != n for row in v):
            raise GraphonError("values must be an n x n matrix")
        for i in range(n):
            for j in range(n):
                if not 0 <= v[i][j] <= 1:
                    raise GraphonError(f"value {v[i][j]} at ({i},{j}) outside [0,1]")
                if v[i][j] != v[j][i]:
                    raise GraphonError(f"values not symmetric at ({i},{j})")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "values", v)

    @property
    def block_count(self) -> int:
        return len(self.weights)

    def is_constant(self) -> bool:
        first = self.values[0][0]
        return all(x == first for row in self.values for x in row)

    def permuted(self, perm: Sequence[int]) -> "StepGraphon":
        """Relabel blocks: new block i is old block perm[i]."""
        return StepGraphon(
            [self.weights[p] for p in perm],
            [[self.values[p][q] for q in perm] for p in perm],
        )

    def to_dict(self) -> dict:
        return {
            "weights": [str(w) for w in self.weights],
            "values": [[str(x) for x in row] for row in self.values],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "StepGraphon":
        try:
            return cls([Fraction(str(w)) for w in data["weights"]],
                       [[Fraction(str(x)) for x in row] for row in data["values"]])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise GraphonError(f"malformed graphon document: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "StepGraphon":
        return cls.from_dict(json.loads(text))


def constant_graphon(c) -> StepGraphon:
    return StepGraphon([1], [[c]])


def graphon_from_graph(adjacency: Sequence[Sequence[int]]) -> StepGraphon:
    """Uniform n-block graphon of a simple graph given by its 0/1 adjacency matrix."""
    n = len(adjacency)
    if n == 0:
        raise GraphonError("empty adjacency matrix")
    for i in range(n):
        if len(adjacency[i]) != n:
            raise GraphonError("adjacency matrix must be square")
        for j in range(n):
            if adjacency[i][j] not in (0, 1):
                raise GraphonError("adjacency entries must be 0 or 1")
            if adjacency[i][j] != adjacency[j][i]:
                raise GraphonError(f"adjacency matrix not symmetric at ({i},{j})")
    return StepGraphon([Fraction(1, n)] * n, adjacency)


def _random_rational(rng: random.Random, bound: int, positive: bool = False) -> Fraction:
    q = rng.randint(1, bound)
    p = rng.randint(1 if positive else 0, q)
    return Fraction(p, q)


def random_graphon(seed: int, max_blocks: int = 3, denominator_bound: int = 6, power: int = 1) -> StepGraphon:
    """Seeded random step graphon.

    Block count is uniform in 1..max_blocks.  Raw weights and values are
    rationals with denominators at most ``denominator_bound``; weights are then
    normalised.  With ``power`` D > 1 every value is replaced by its D-th power,
    so that values raised to exponents with denominator D stay rational.
    """
    if max_blocks < 1 or denominator_bound < 1 or power < 1:
        raise GraphonError("random_graphon bounds must be positive")
    rng = random.Random(seed)
    n = rng.randint(1, max_blocks)
    raw = [_random_rational(rng, denominator_bound, positive=True) for _ in range(n)]
    total = sum(raw)
    weights = [w / total for w in raw]
    values = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            values[i][j] = values[j][i] = _random_rational(rng, denominator_bound) ** power
    return StepGraphon(weights, values)


def edge_density(W: StepGraphon) -> Fraction:
    n = W.block_count
    return sum((W.weights[i] * W.weights[j] * W.values[i][j] for i in range(n) for j in range(n)), Fraction(0))


def rho(W: StepGraphon, x_F: Sequence[int]) -> Fraction:
    """E_y prod_{i in F} W(x_i, y) for a block assignment of the index set F."""
    total = Fraction(0)
    for y, wy in enumerate(W.weights):
        term = wy
        for xi in x_F:
            term *= W.values[xi][y]
        total += term
    return total


class _Scaled:
    """Integer form of a graphon: weights a/Dw, values b/Dv."""

    def __init__(self, W: StepGraphon):
        self.n = W.block_count
        self.dw = reduce(math.lcm, (w.denominator for w in W.weights), 1)
        self.dv = reduce(math.lcm, (x.denominator for row in W.values for x in row), 1)
        self.a = [int(w * self.dw) for w in W.weights]
        self.b = [[int(x * self.dv) for x in row] for row in W.values]
        self._rho: dict[tuple[int, ...], int] = {}

    def rho_num(self, key: tuple[int, ...]) -> int:
        """Numerator of rho for a sorted tuple of blocks; denominator dw * dv**len(key)."""
        r = self._rho.get(key)
        if r is None:
            r = 0
            for y in range(self.n):
                t = self.a[y]
                for xi in key:
                    t *= self.b[xi][y]
                    if not t:
                        break
                r += t
            self._rho[key] = r
        return r


def _exponent_map(H: BipartiteGraph, alpha=None) -> dict[tuple[int, ...], Fraction]:
    counts = H.neighborhood_counts()
    if alpha is None:
        return {nb: Fraction(c) for nb, c in counts.items()}
    alpha = as_weights(alpha)
    exps = {}
    for nb, c in counts.items():
        e = c * alpha[len(nb)]
        if e:
            exps[nb] = e
    return exps


def _eliminate(W: StepGraphon, m: int, exps: dict[tuple[int, ...], Fraction], mode: str,
               prec: int, cap: int):
    """E over x in [n]^m of prod_I rho(x_I)^{e_I}."""
    check_mode(mode)
    n = W.block_count
    check_cap(n**m * max(1, len(exps)), cap, "right-side elimination")
    integral = all(e.denominator == 1 for e in exps.values())
    if mode == "exact" and not integral:
        raise ExactnessError("fractional exponent on rho; exact evaluation impossible")
    sc = _Scaled(W)
    items = [(tuple(i - 1 for i in nb), e) for nb, e in exps.items()]
    if integral and mode != "float":
        int_items = [(idx, int(e)) for idx, e in items]
        total = 0
        for x in product(range(n), repeat=m):
            term = 1
            for i in x:
                term *= sc.a[i]
            for idx, e in int_items:
                term *= sc.rho_num(tuple(sorted(x[i] for i in idx))) ** e
                if not term:
                    break
            total += term
        den = sc.dw**m
        for idx, e in int_items:
            den *= (sc.dw * sc.dv ** len(idx)) ** e
        return Fraction(total, den)
    with mpmath.workprec(prec):
        dw, dv = mpmath.mpf(sc.dw), mpmath.mpf(sc.dv)
        fitems = [(idx, to_mpf(e, prec), dw * dv ** len(idx)) for idx, e in items]
        terms = []
        for x in product(range(n), repeat=m):
            term = mpmath.mpf(1)
            for i in x:
                term *= sc.a[i]
            term /= dw**m
            for idx, e, den in fitems:
                r = sc.rho_num(tuple(sorted(x[i] for i in idx)))
                if r == 0:
                    term = mpmath.mpf(0)
                    break
                term *= mpmath.power(mpmath.mpf(r) / den, e)
            terms.append(term)
        return mpmath.fsum(terms)


def hom_density(H: BipartiteGraph, W: StepGraphon, mode: str = "auto",
                prec: int = DEFAULT_PRECISION_BITS, cap: int = DEFAULT_TERM_CAP):
    """t_H(W) by summing prod_v rho(x_{N(v)}) over block assignments of A."""
    return _eliminate(W, H.a_size, _exponent_map(H), mode, prec, cap)


def weighted_density(H: BipartiteGraph, W: StepGraphon, alpha, mode: str = "auto",
                     prec: int = DEFAULT_PRECISION_BITS, cap: int = DEFAULT_TERM_CAP):
    """Weighted density: every B-vertex of degree k has its rho-factor raised to alpha_k.

    Exact for integer weights (unless ``mode='float'``), mpmath floats otherwise.
    """
    return _eliminate(W, H.a_size, _exponent_map(H, alpha), mode, prec, cap)


def rooted_density(H: BipartiteGraph, W: StepGraphon, x_A: Sequence[int]) -> Fraction:
    """Proportion of extensions of the root assignment x_A that are homomorphisms."""
    if len(x_A) != H.a_size:
        raise GraphonError(f"root assignment has {len(x_A)} entries, A has {H.a_size}")
    if any(not 0 <= x < W.block_count for x in x_A):
        raise GraphonError("block index out of range in root assignment")
    out = Fraction(1)
    for nb in H.b_neighborhoods:
        out *= rho(W, [x_A[i - 1] for i in nb])
    return out


def rooted_moment(H: BipartiteGraph, W: StepGraphon, p: int = 1, cap: int = DEFAULT_TERM_CAP) -> Fraction:
    """E_{x_A} of rooted_density(H, W, x_A)**p by direct enumeration of roots."""
    check_cap(W.block_count**H.a_size, cap, "rooted moment")
    total = Fraction(0)
    for x in product(range(W.block_count), repeat=H.a_size):
        weight = Fraction(1)
        for i in x:
            weight *= W.weights[i]
        total += weight * rooted_density(H, W, x) ** p
    return total


def hom_density_oracle(H: BipartiteGraph, W: StepGraphon, cap: int = DEFAULT_TERM_CAP) -> Fraction:
    """Literal expectation of prod over edges W(x_a, y_b) over all vertex assignments."""
    n, m, b = W.block_count, H.a_size, H.b_size
    check_cap(n ** (m + b), cap, "naive homomorphism oracle")
    edges = H.edges()
    total = Fraction(0)
    for xs in product(range(n), repeat=m + b):
        term = Fraction(1)
        for v in xs:
            term *= W.weights[v]
        for a, bv in edges:
            term *= W.values[xs[a - 1]][xs[m + bv]]
            if not term:
                break
        total += term
    return total
