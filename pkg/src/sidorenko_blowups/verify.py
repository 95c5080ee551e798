"""Seeded randomized checks of the density identities and inequalities.

Every check draws fresh random instances per trial from a sub-seed derived
from the master seed, evaluates both sides of one or more relations, and
records the margin.  Inequalities ``lhs >= rhs`` pass when
``lhs - rhs >= -slack * max(1, |lhs|)``; equalities pass on exact equality
(exact mode) or relative error at most ``relative_tolerance`` (float mode).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath

from .arith import (
    DEFAULT_PRECISION_BITS,
    difference,
    format_value,
    is_exact,
    parse_value,
    to_mpf,
)
from .chains import (
    build_G_alpha,
    build_H_alpha,
    chain_betas,
    chain_exponents,
    host_copy,
    product_kernel,
    hyper_density_structured,
    weak_norming_sides,
)
from .graphon import (
    StepGraphon,
    constant_graphon,
    edge_density,
    hom_density,
    hom_density_oracle,
    random_graphon,
    rooted_moment,
    weighted_density,
)
from .graphs import (
    BipartiteGraph,
    alpha_profile,
    blow_up,
    make_complete_bipartite,
    make_downset,
    make_even_cycle,
    make_mobius,
    make_mr_incidence,
    minimal_blowup_exponent,
    theorem1_applies,
    weighted_edge_count,
)
from .reflection import (
    blowup_spec,
    galpha_spec,
    halpha_spec,
    hypergraph_blowup,
    partite_isomorphic,
    reflection_hypergraph,
)

CHECK_IDS = (
    "mobius_square",
    "holder_trick",
    "downset_theorem",
    "main_theorem",
    "star_equality",
    "norming_inequality",
    "g_alpha_equality",
    "cfs_bound",
    "blowup_power_identity",
    "oracle_crosscheck",
    "reflection_iso",
    "known_sidorenko_sanity",
)

# checks whose right-hand sides carry fractional powers of rho
FLOAT_ONLY = {"holder_trick"}


class ConfigurationError(ValueError):
    """The requested check cannot be run with this configuration or policy."""


@dataclass(frozen=True)
class TolerancePolicy:
    mode: str = "exact"
    relative_tolerance: float = 1e-9
    slack: float = 1e-9
    precision_bits: int = DEFAULT_PRECISION_BITS
    power_compatible: bool = False

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise ConfigurationError(f"policy mode must be 'exact' or 'float', got {self.mode!r}")
        if self.relative_tolerance <= 0 or self.slack <= 0:
            raise ConfigurationError("tolerances must be positive")


@dataclass(frozen=True)
class SizeConfig:
    max_blocks: int = 3
    denominator_bound: int = 6
    max_a: int = 5
    max_r: int = 3
    max_beta: int = 2
    max_multiplier: int = 2
    mr_pairs: tuple[tuple[int, int], ...] = ((3, 2), (4, 2), (3, 3))
    max_vertices: int = 7
    max_p: int = 3
    graphon: str = "random"  # random | constant | mixed

    def __post_init__(self):
        if self.graphon not in ("random", "constant", "mixed"):
            raise ConfigurationError(f"unknown graphon family {self.graphon!r}")
        object.__setattr__(self, "mr_pairs", tuple(tuple(p) for p in self.mr_pairs))
        for m, r in self.mr_pairs:
            if not 1 <= r <= m:
                raise ConfigurationError(f"(m, r) = ({m}, {r}) is not admissible")


def default_policy(check: str) -> TolerancePolicy:
    return TolerancePolicy(mode="float" if check in FLOAT_ONLY else "exact")


@dataclass
class TrialRecord:
    trial: int
    sub_seed: int
    relation: str
    kind: str  # "ineq" or "eq"
    instance: str
    lhs: object
    rhs: object
    margin: object
    passed: bool

    @property
    def mode(self) -> str:
        return "exact" if all(is_exact(v) for v in (self.lhs, self.rhs, self.margin)) else "float"


@dataclass
class VerificationReport:
    check: str
    seed: int
    trials: int
    records: list[TrialRecord]
    config: dict = field(default_factory=dict)
    policy: dict = field(default_factory=dict)

    @property
    def min_margin(self):
        if not self.records:
            return None
        return min(self.records, key=lambda rec: to_mpf(rec.margin)).margin

    @property
    def passed(self) -> bool:
        return all(rec.passed for rec in self.records)

    def failures(self) -> list[TrialRecord]:
        return [rec for rec in self.records if not rec.passed]

    def summary(self) -> str:
        mm = self.min_margin
        status = "PASS" if self.passed else "FAIL"
        mm_text = "n/a" if mm is None else mpmath.nstr(to_mpf(mm), 6)
        return (f"{status} {self.check}: {len(self.records)} relations over {self.trials} trials, "
                f"min margin {mm_text}")


def sub_seed(seed: int, trial: int) -> int:
    """64-bit seed for one trial: blake2b of 'seed:trial'."""
    digest = hashlib.blake2b(f"{seed}:{trial}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


# ---------------------------------------------------------------------------
# comparisons


def _judge(kind: str, lhs, rhs, policy: TolerancePolicy):
    with mpmath.workprec(policy.precision_bits):
        diff = difference(lhs, rhs, policy.precision_bits)
        if kind == "ineq":
            margin = diff
            bound = policy.slack * max(1, abs(to_mpf(lhs, policy.precision_bits)))
            return margin, bool(to_mpf(margin, policy.precision_bits) >= -bound)
        margin = -abs(diff)
        if is_exact(diff):
            return margin, diff == 0
        scale = max(abs(to_mpf(lhs, policy.precision_bits)), abs(to_mpf(rhs, policy.precision_bits)))
        return margin, bool(abs(diff) <= policy.relative_tolerance * scale)


def _emode(policy: TolerancePolicy) -> str:
    return "float" if policy.mode == "float" else "exact"


def _power(base, e, policy: TolerancePolicy):
    """base**e for a nonnegative integer or rational e, float in float mode."""
    e = Fraction(e)
    if policy.mode == "exact" and e.denominator == 1:
        return Fraction(base) ** int(e)
    with mpmath.workprec(policy.precision_bits):
        return mpmath.power(to_mpf(base, policy.precision_bits), to_mpf(e, policy.precision_bits))


def _edge_density(W: StepGraphon, policy: TolerancePolicy):
    t = edge_density(W)
    return t if policy.mode == "exact" else to_mpf(t, policy.precision_bits)


# ---------------------------------------------------------------------------
# random instances


def _draw_graphon(rng: random.Random, trial: int, cfg: SizeConfig, power: int = 1) -> StepGraphon:
    constant = cfg.graphon == "constant" or (cfg.graphon == "mixed" and trial % 4 == 0)
    if constant:
        q = rng.randint(1, cfg.denominator_bound)
        return constant_graphon(Fraction(rng.randint(0, q), q) ** power)
    return random_graphon(rng.getrandbits(64), cfg.max_blocks, cfg.denominator_bound, power)


def random_bipartite(rng: random.Random, max_a: int, max_r: int, max_b: int = 6) -> BipartiteGraph:
    m = rng.randint(1, max_a)
    r = rng.randint(1, min(m, max_r))
    b = rng.randint(1, max_b)
    nbhds = [rng.sample(range(1, m + 1), rng.randint(1, r)) for _ in range(b - 1)]
    nbhds.append(rng.sample(range(1, m + 1), r))
    return BipartiteGraph(m, nbhds)


def random_admissible_graph(rng: random.Random, max_a: int, max_r: int, max_multiplier: int) -> BipartiteGraph:
    """Random H whose degree counts are multiples of C(m, r) C(r, k); neighbourhoods may repeat."""
    m = rng.randint(1, max_a)
    r = rng.randint(1, min(m, max_r))
    nbhds = []
    for k in range(1, r + 1):
        mult = rng.randint(1 if k == r else 0, max_multiplier)
        d = mult * math.comb(m, r) * math.comb(r, k)
        nbhds.extend(rng.sample(range(1, m + 1), k) for _ in range(d))
    return BipartiteGraph(m, nbhds)


def random_chain_weights(rng: random.Random, m: int, r: int, max_beta: int) -> dict[int, int]:
    """alpha with alpha_k = beta_k C(m-k, r-k), beta_k in 0..max_beta, beta_r >= 1."""
    alpha = {}
    for k in range(1, r + 1):
        beta = rng.randint(1 if k == r else 0, max_beta)
        alpha[k] = beta * math.comb(m - k, r - k)
    return alpha


def random_tree(rng: random.Random, max_vertices: int) -> BipartiteGraph:
    v = rng.randint(2, max_vertices)
    parent = [None] + [rng.randrange(i) for i in range(1, v)]
    colour = [0] * v
    for i in range(1, v):
        colour[i] = 1 - colour[parent[i]]
    a_side = [i for i in range(v) if colour[i] == 0]
    pos = {x: n + 1 for n, x in enumerate(a_side)}
    nbhds = []
    for b in (i for i in range(v) if colour[i] == 1):
        nb = [pos[c] for c in range(1, v) if parent[c] == b]
        if parent[b] is not None:
            nb.append(pos[parent[b]])
        nbhds.append(nb)
    return BipartiteGraph(len(a_side), nbhds)


def _alpha_text(alpha) -> str:
    return ",".join(f"{k}:{v}" for k, v in sorted(dict(alpha).items()))


def _graphon_text(W: StepGraphon) -> str:
    return f"n={W.block_count}" + (" const" if W.is_constant() else "")


# ---------------------------------------------------------------------------
# trials: each returns a list of (relation, kind, instance, lhs, rhs)


def _trial_mobius_square(rng, trial, cfg, policy):
    W = _draw_graphon(rng, trial, cfg)
    mode = _emode(policy)
    m2 = hom_density(blow_up(make_mobius(), 2), W, mode, policy.precision_bits)
    f53 = hom_density(make_mr_incidence(5, 3), W, mode, policy.precision_bits)
    k2 = _power(_edge_density(W, policy), 30, policy)
    inst = _graphon_text(W)
    return [("t(M^2) >= t(F_5,3)", "ineq", inst, m2, f53),
            ("t(F_5,3) >= t(K2)^30", "ineq", inst, f53, k2)]


def _trial_holder_trick(rng, trial, cfg, policy):
    H = random_bipartite(rng, cfg.max_a, cfg.max_r)
    W = _draw_graphon(rng, trial, cfg)
    mode = _emode(policy)
    alpha = alpha_profile(H)
    J = make_downset(H.a_size, H.max_degree)
    lhs = hom_density(H, W, mode, policy.precision_bits)
    rhs = weighted_density(J, W, alpha, mode, policy.precision_bits)
    inst = f"m={H.a_size} B={list(H.b_neighborhoods)} alpha={_alpha_text(alpha.weights)} {_graphon_text(W)}"
    return [("t(H) >= t_J^alpha", "ineq", inst, lhs, rhs)]


def _trial_downset_theorem(rng, trial, cfg, policy):
    m = rng.randint(1, cfg.max_a)
    r = rng.randint(1, min(m, cfg.max_r))
    alpha = random_chain_weights(rng, m, r, cfg.max_beta)
    W = _draw_graphon(rng, trial, cfg)
    J = make_downset(m, r)
    lhs = weighted_density(J, W, alpha, _emode(policy), policy.precision_bits)
    rhs = _power(_edge_density(W, policy), weighted_edge_count(J, alpha), policy)
    inst = f"m={m} r={r} alpha={_alpha_text(alpha)} {_graphon_text(W)}"
    return [("t_J^alpha >= t(K2)^e_alpha(J)", "ineq", inst, lhs, rhs)]


def _trial_main_theorem(rng, trial, cfg, policy):
    H = random_admissible_graph(rng, cfg.max_a, cfg.max_r, cfg.max_multiplier)
    ok, _ = theorem1_applies(H)
    if not ok:
        raise ConfigurationError("generated graph fails the divisibility condition")
    W = _draw_graphon(rng, trial, cfg)
    mode = _emode(policy)
    alpha = alpha_profile(H)
    J = make_downset(H.a_size, H.max_degree)
    tH = hom_density(H, W, mode, policy.precision_bits)
    tJ = weighted_density(J, W, alpha, mode, policy.precision_bits)
    e = H.num_edges
    k2 = _power(_edge_density(W, policy), e, policy)
    inst = f"m={H.a_size} r={H.max_degree} |B|={H.b_size} e={e} {_graphon_text(W)}"
    return [("t(H) >= t_J^alpha", "ineq", inst, tH, tJ),
            ("t_J^alpha >= t(K2)^e(H)", "ineq", inst, tJ, k2),
            ("t(H) >= t(K2)^e(H)", "ineq", inst, tH, k2),
            ("e_alpha(J) == e(H)", "eq", inst, weighted_edge_count(J, alpha), Fraction(e))]


def _chain_instance(rng, trial, cfg, policy):
    m, r = rng.choice(cfg.mr_pairs)
    alpha = random_chain_weights(rng, m, r, cfg.max_beta)
    betas = chain_betas(m, r, alpha)
    power = 1
    if policy.power_compatible:
        power = math.lcm(*(q.denominator for q in chain_exponents(r, betas).values()))
    W = _draw_graphon(rng, trial, cfg, power)
    inst = f"m={m} r={r} alpha={_alpha_text(alpha)} beta={_alpha_text(betas)} {_graphon_text(W)}"
    return m, r, alpha, betas, W, inst


def _trial_star_equality(rng, trial, cfg, policy):
    m, r, alpha, betas, W, inst = _chain_instance(rng, trial, cfg, policy)
    mode = _emode(policy)
    lhs = weighted_density(make_downset(m, r), W, alpha, mode, policy.precision_bits)
    rhs = hyper_density_structured(build_H_alpha(m, r, alpha), product_kernel(W, m, r, alpha),
                                   mode, policy.precision_bits)
    return [("t_J^alpha == t(H_alpha; W_alpha)", "eq", inst, lhs, rhs)]


def _trial_norming_inequality(rng, trial, cfg, policy):
    m, r, alpha, betas, W, inst = _chain_instance(rng, trial, cfg, policy)
    H = build_H_alpha(m, r, alpha)
    G = host_copy(H, range(1, r + 1))
    K = product_kernel(W, m, r, alpha)
    lhs, rhs = weak_norming_sides(H, G, K, _emode(policy), policy.precision_bits)
    return [(f"t(H_alpha) >= t(G_alpha)^{math.comb(m, r)}", "ineq", inst, lhs, rhs)]


def _trial_g_alpha_equality(rng, trial, cfg, policy):
    m, r, alpha, betas, W, inst = _chain_instance(rng, trial, cfg, policy)
    mode = _emode(policy)
    lhs = hyper_density_structured(build_G_alpha(r, betas), product_kernel(W, m, r, alpha),
                                   mode, policy.precision_bits)
    rhs = weighted_density(make_downset(r, r), W, betas, mode, policy.precision_bits)
    return [("t(G_alpha; W_alpha) == t_J^beta", "eq", inst, lhs, rhs)]


def _trial_cfs_bound(rng, trial, cfg, policy):
    m, r, alpha, betas, W, inst = _chain_instance(rng, trial, cfg, policy)
    J = make_downset(r, r)
    e_beta = weighted_edge_count(J, betas)
    e_alpha = weighted_edge_count(make_downset(m, r), alpha)
    lhs = weighted_density(J, W, betas, _emode(policy), policy.precision_bits)
    rhs = _power(_edge_density(W, policy), e_beta, policy)
    return [("t_J^beta >= t(K2)^e_beta(J)", "ineq", inst, lhs, rhs),
            ("e_beta(J) == e_alpha(H)/C(m,r)", "eq", inst, e_beta, e_alpha / math.comb(m, r))]


def _trial_blowup_power_identity(rng, trial, cfg, policy):
    H = random_bipartite(rng, min(cfg.max_a, 4), cfg.max_r, max_b=4)
    W = _draw_graphon(rng, trial, cfg)
    pmin = minimal_blowup_exponent(H)
    p = pmin if trial % 2 and pmin <= 12 else rng.randint(1, cfg.max_p)
    Hp = blow_up(H, p)
    mode = _emode(policy)
    moment = rooted_moment(H, W, p)
    if mode == "float":
        moment = to_mpf(moment, policy.precision_bits)
    tHp = hom_density(Hp, W, mode, policy.precision_bits)
    inst = f"m={H.a_size} B={list(H.b_neighborhoods)} p={p} {_graphon_text(W)}"
    out = [("E[t(H;x_A)^p] == t(H^p)", "eq", inst, moment, tHp)]
    if theorem1_applies(Hp)[0]:
        k2 = _power(_edge_density(W, policy), p * H.num_edges, policy)
        out.append(("E[t(H;x_A)^p] >= t(K2)^(p e(H))", "ineq", inst, moment, k2))
    return out


def _trial_oracle_crosscheck(rng, trial, cfg, policy):
    v = rng.randint(2, cfg.max_vertices)
    m = rng.randint(1, v - 1)
    nbhds = [rng.sample(range(1, m + 1), rng.randint(0, m)) for _ in range(v - m)]
    H = BipartiteGraph(m, nbhds)
    W = _draw_graphon(rng, trial, cfg)
    fast = hom_density(H, W, _emode(policy), policy.precision_bits)
    slow = hom_density_oracle(H, W)
    if policy.mode == "float":
        slow = to_mpf(slow, policy.precision_bits)
    inst = f"m={m} B={list(H.b_neighborhoods)} {_graphon_text(W)}"
    return [("t(H) == naive t(H)", "eq", inst, fast, slow)]


def _shuffled(rng, G):
    perms = []
    for c in G.classes:
        p = list(range(len(c)))
        rng.shuffle(p)
        perms.append(p)
    return G.relabelled(perms)


REFLECTION_INSTANCES = (
    ("galpha", 2), ("galpha", 3),
    ("halpha", 3, 2), ("halpha", 4, 2), ("halpha", 4, 3),
    ("blowup", 2, 1, 2),
)


def _trial_reflection_iso(rng, trial, cfg, policy):
    if trial < len(REFLECTION_INSTANCES):
        inst = REFLECTION_INSTANCES[trial]
        if inst[0] == "galpha":
            r = inst[1]
            left = reflection_hypergraph(galpha_spec(r))
            right = build_G_alpha(r, {k: 1 for k in range(1, r + 1)})
        elif inst[0] == "halpha":
            m, r = inst[1:]
            left = reflection_hypergraph(halpha_spec(m, r))
            right = build_H_alpha(m, r, {k: math.comb(m - k, r - k) for k in range(1, r + 1)})
        else:
            r, k, p = inst[1:]
            left = reflection_hypergraph(blowup_spec(galpha_spec(r), k, p))
            right = hypergraph_blowup(reflection_hypergraph(galpha_spec(r)), k, p)
        text = "_".join(map(str, inst))
    else:
        m = rng.randint(2, 4)
        r = rng.randint(1, min(m, cfg.max_r))
        alpha = random_chain_weights(rng, m, r, min(cfg.max_beta, 2))
        betas = chain_betas(m, r, alpha)
        levels = [k for k in range(1, r + 1) if betas[k]]
        spec = halpha_spec(m, r, levels)
        for k in levels:
            if betas[k] > 1:
                spec = blowup_spec(spec, k, betas[k])
        left = reflection_hypergraph(spec)
        right = build_H_alpha(m, r, alpha)
        text = f"iterated m={m} r={r} beta={_alpha_text(betas)}"
    ok, _ = partite_isomorphic(_shuffled(rng, left), right)
    return [("reflection hypergraph ~= chain hypergraph", "eq", text, Fraction(int(ok)), Fraction(1))]


def _trial_known_sidorenko_sanity(rng, trial, cfg, policy):
    kind = rng.choice(["complete", "cycle", "tree"])
    if kind == "complete":
        H = make_complete_bipartite(rng.randint(1, 3), rng.randint(1, 3))
    elif kind == "cycle":
        H = make_even_cycle(rng.randint(2, 4))
    else:
        H = random_tree(rng, cfg.max_vertices)
    W = _draw_graphon(rng, trial, cfg)
    lhs = hom_density(H, W, _emode(policy), policy.precision_bits)
    rhs = _power(_edge_density(W, policy), H.num_edges, policy)
    inst = f"{kind} m={H.a_size} B={list(H.b_neighborhoods)} {_graphon_text(W)}"
    return [("t(H) >= t(K2)^e(H)", "ineq", inst, lhs, rhs)]


def _trial_negative_control(rng, trial, cfg, policy, delta=Fraction(1, 100)):
    W = _draw_graphon(rng, trial, cfg)
    lhs = hom_density(make_mobius(), W, _emode(policy), policy.precision_bits)
    rhs = (1 + Fraction(delta)) * _power(_edge_density(W, policy), 15, policy)
    return [(f"t(M) >= (1+{delta}) t(K2)^15", "ineq", _graphon_text(W), lhs, rhs)]


TRIALS = {
    "mobius_square": _trial_mobius_square,
    "holder_trick": _trial_holder_trick,
    "downset_theorem": _trial_downset_theorem,
    "main_theorem": _trial_main_theorem,
    "star_equality": _trial_star_equality,
    "norming_inequality": _trial_norming_inequality,
    "g_alpha_equality": _trial_g_alpha_equality,
    "cfs_bound": _trial_cfs_bound,
    "blowup_power_identity": _trial_blowup_power_identity,
    "oracle_crosscheck": _trial_oracle_crosscheck,
    "reflection_iso": _trial_reflection_iso,
    "known_sidorenko_sanity": _trial_known_sidorenko_sanity,
    "negative_control": _trial_negative_control,
}


def _run_trial(check: str, seed: int, trial: int, cfg: SizeConfig, policy: TolerancePolicy) -> list[TrialRecord]:
    s = sub_seed(seed, trial)
    rng = random.Random(s)
    out = []
    for relation, kind, inst, lhs, rhs in TRIALS[check](rng, trial, cfg, policy):
        margin, ok = _judge(kind, lhs, rhs, policy)
        out.append(TrialRecord(trial, s, relation, kind, inst, lhs, rhs, margin, ok))
    return out


def _validate(check: str, cfg: SizeConfig, policy: TolerancePolicy) -> None:
    if check not in TRIALS:
        raise ConfigurationError(f"unknown check {check!r}; expected one of {CHECK_IDS}")
    if check in FLOAT_ONLY and policy.mode == "exact":
        raise ConfigurationError(f"{check} raises rho to fractional powers; run it in float mode")
    if check in ("star_equality", "norming_inequality", "g_alpha_equality", "cfs_bound"):
        for m, r in cfg.mr_pairs:
            if m < 1 or not 1 <= r <= m:
                raise ConfigurationError(f"no admissible weights for (m, r) = ({m}, {r})")
        if not cfg.mr_pairs:
            raise ConfigurationError("mr_pairs is empty")


def run_check(check: str, seed: int = 0, trials: int = 10, config: SizeConfig | None = None,
              policy: TolerancePolicy | None = None, jobs: int = 1) -> VerificationReport:
    """Run ``trials`` seeded trials of one check; records are ordered by trial index."""
    cfg = config or SizeConfig()
    policy = policy or default_policy(check)
    _validate(check, cfg, policy)
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_trial, [check] * trials, [seed] * trials, range(trials),
                                   [cfg] * trials, [policy] * trials))
    else:
        chunks = [_run_trial(check, seed, i, cfg, policy) for i in range(trials)]
    records = [rec for chunk in chunks for rec in chunk]
    return VerificationReport(check, seed, trials, records, asdict(cfg), asdict(policy))


def negative_control(seed: int = 0, trials: int = 20, config: SizeConfig | None = None,
                     policy: TolerancePolicy | None = None) -> VerificationReport:
    """A deliberately false inequality (t_M >= 1.01 t_K2^15); its report must fail."""
    cfg = config or SizeConfig(graphon="mixed")
    return run_check("negative_control", seed, trials, cfg, policy or TolerancePolicy())


# ---------------------------------------------------------------------------
# serialization

RECORD_FIELDS = ("trial", "sub_seed", "relation", "kind", "instance", "mode", "lhs", "rhs", "margin", "pass")
CSV_FIELDS = ("check", "seed", "trials") + RECORD_FIELDS


def _record_dict(rec: TrialRecord) -> dict:
    return {
        "trial": rec.trial,
        "sub_seed": rec.sub_seed,
        "relation": rec.relation,
        "kind": rec.kind,
        "instance": rec.instance,
        "mode": rec.mode,
        "lhs": format_value(rec.lhs),
        "rhs": format_value(rec.rhs),
        "margin": format_value(rec.margin),
        "pass": rec.passed,
    }


def _record_from(d: dict) -> TrialRecord:
    passed = d["pass"]
    if isinstance(passed, str):
        passed = passed.strip().lower() == "true"
    return TrialRecord(int(d["trial"]), int(d["sub_seed"]), d["relation"], d["kind"], d["instance"],
                       parse_value(d["lhs"]), parse_value(d["rhs"]), parse_value(d["margin"]), bool(passed))


def write_report(report: VerificationReport, fmt: str = "json") -> str:
    """Serialize with a stable field order; rationals as 'p/q', floats as decimal strings."""
    if fmt == "json":
        mm = report.min_margin
        doc = {
            "check": report.check,
            "seed": report.seed,
            "trials": report.trials,
            "precision_bits": report.policy.get("precision_bits", DEFAULT_PRECISION_BITS),
            "config": report.config,
            "policy": report.policy,
            "records": [_record_dict(r) for r in report.records],
            "min_margin": None if mm is None else format_value(mm),
            "pass": report.passed,
        }
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for rec in report.records:
            row = {"check": report.check, "seed": report.seed, "trials": report.trials}
            row.update(_record_dict(rec))
            writer.writerow(row)
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def read_report(text: str, fmt: str = "json") -> VerificationReport:
    if fmt == "json":
        doc = json.loads(text)
        return VerificationReport(doc["check"], int(doc["seed"]), int(doc["trials"]),
                                  [_record_from(d) for d in doc["records"]],
                                  doc.get("config", {}), doc.get("policy", {}))
    if fmt == "csv":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            return VerificationReport("", 0, 0, [])
        first = rows[0]
        return VerificationReport(first["check"], int(first["seed"]), int(first["trials"]),
                                  [_record_from(r) for r in rows])
    raise ValueError(f"unknown report format {fmt!r}")
