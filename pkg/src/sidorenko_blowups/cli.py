"""Command-line front end.

    sidorenko-blowups construct mobius --out m.json
    sidorenko-blowups minp m.json
    sidorenko-blowups density hom m.json W.json --mode float
    sidorenko-blowups check mobius_square --seed 7 --trials 100

Exit codes: 0 success or passing check, 1 failing check (report still
written), 2 usage error, malformed input or infeasible size.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path

from .arith import DEFAULT_PRECISION_BITS, ExactnessError, InfeasibleSizeError, format_value, is_exact
from .chains import (
    DivisibilityError,
    ProductKernel,
    build_G_alpha,
    build_H_alpha,
    hyper_density,
    product_kernel,
)
from .graphon import (
    GraphonError,
    StepGraphon,
    constant_graphon,
    edge_density,
    hom_density,
    hom_density_oracle,
    random_graphon,
    rooted_density,
    weighted_density,
)
from .graphs import (
    BipartiteGraph,
    GraphError,
    blow_up,
    companion_graph,
    disjoint_union,
    make_complete_bipartite,
    make_downset,
    make_even_cycle,
    make_mobius,
    make_mr_incidence,
    minimal_blowup_exponent,
)
from .hypergraph import HypergraphError, PartiteHypergraph
from .reflection import (
    GroupCapError,
    IsomorphismCapError,
    ReflectionSpec,
    blowup_spec,
    galpha_spec,
    halpha_spec,
    hypergraph_blowup,
    partite_isomorphic,
    reflection_hypergraph,
)
from .verify import (
    CHECK_IDS,
    ConfigurationError,
    SizeConfig,
    TolerancePolicy,
    default_policy,
    run_check,
    write_report,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


@dataclass
class CliConfig:
    subcommand: str
    args: list
    out: str | None
    seed: int
    trials: int
    blocks: int
    denom_bound: int
    tolerance: float | None
    mode: str | None
    fmt: str
    jobs: int
    power_compatible: bool

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "CliConfig":
        cfg = cls(ns.subcommand, list(ns.args), ns.out, ns.seed, ns.trials, ns.blocks, ns.denom_bound,
                  ns.tolerance, ns.mode, ns.format, ns.jobs, ns.power_compatible)
        if cfg.trials < 0:
            raise UsageError("--trials must be nonnegative")
        if cfg.blocks < 1 or cfg.denom_bound < 2:
            raise UsageError("--blocks must be >= 1 and --denom-bound >= 2")
        if cfg.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if cfg.tolerance is not None and cfg.tolerance <= 0:
            raise UsageError("--tolerance must be positive")
        return cfg


# ---------------------------------------------------------------------------
# argument helpers


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{what} must be an integer, got {text!r}") from None


def _frac(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what} must be a rational like 3/2, got {text!r}") from None


def _need(args: list, n: int, usage: str) -> None:
    if len(args) != n:
        raise UsageError(f"expected: {usage}")


def _weights(tokens) -> dict[int, Fraction]:
    return {k: _frac(t, f"weight {k}") for k, t in enumerate(tokens, start=1)}


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object")
    return doc


def _load(path: str, kind):
    doc = _read_json(path)
    try:
        return kind.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path} is not a valid {kind.__name__} document: {exc}") from None


def _load_kernel(path: str):
    doc = _read_json(path)
    try:
        if "exponents" in doc:
            return ProductKernel.from_dict(doc)
        return ProductKernel(StepGraphon.from_dict(doc), {1: 1})
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path} is not a valid kernel document: {exc}") from None


def _emit(cfg: CliConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out:
        try:
            Path(cfg.out).write_text(text)
        except OSError as exc:
            raise InputError(f"cannot write {cfg.out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj.to_dict(), indent=2)


# ---------------------------------------------------------------------------
# subcommands


def _named_spec(args: list) -> tuple[ReflectionSpec, PartiteHypergraph | None, list]:
    """Parse 'galpha r' / 'halpha m r' / a spec file; returns spec, default target, leftovers."""
    if not args:
        raise UsageError("expected a spec: galpha R | halpha M R | SPEC.json")
    if args[0] == "galpha":
        if len(args) < 2:
            raise UsageError("expected: galpha R")
        r = _int(args[1], "r")
        return galpha_spec(r), build_G_alpha(r, {k: 1 for k in range(1, r + 1)}), args[2:]
    if args[0] == "halpha":
        if len(args) < 3:
            raise UsageError("expected: halpha M R")
        m, r = _int(args[1], "m"), _int(args[2], "r")
        alpha = {k: comb(m - k, r - k) for k in range(1, r + 1)}
        return halpha_spec(m, r), build_H_alpha(m, r, alpha), args[3:]
    return _load(args[0], ReflectionSpec), None, args[1:]


def cmd_construct(cfg: CliConfig) -> int:
    usage = ("construct NAME ARGS; NAME is one of mobius | incidence M R | downset M R | complete A B | "
             "cycle K | blowup H.json P | union H1.json H2.json | companion H.json | "
             "halpha M R A1..AR | galpha R B1..BR | graphon | constant C | kernel W.json M R A1..AR | "
             "spec galpha R | spec halpha M R | spec-blowup SPEC.json LEVEL P | reflection SPEC.json | "
             "hblowup G.json LEVEL P")
    if not cfg.args:
        raise UsageError(usage)
    name, rest = cfg.args[0], cfg.args[1:]
    if name == "mobius":
        _need(rest, 0, "construct mobius")
        obj = make_mobius()
    elif name in ("incidence", "downset", "complete"):
        _need(rest, 2, f"construct {name} X Y")
        x, y = _int(rest[0], "first parameter"), _int(rest[1], "second parameter")
        obj = {"incidence": make_mr_incidence, "downset": make_downset,
               "complete": make_complete_bipartite}[name](x, y)
    elif name == "cycle":
        _need(rest, 1, "construct cycle K")
        obj = make_even_cycle(_int(rest[0], "K"))
    elif name == "blowup":
        _need(rest, 2, "construct blowup H.json P")
        obj = blow_up(_load(rest[0], BipartiteGraph), _int(rest[1], "P"))
    elif name == "union":
        _need(rest, 2, "construct union H1.json H2.json")
        obj = disjoint_union(_load(rest[0], BipartiteGraph), _load(rest[1], BipartiteGraph))
    elif name == "companion":
        _need(rest, 1, "construct companion H.json")
        obj = companion_graph(_load(rest[0], BipartiteGraph))
    elif name == "halpha":
        if len(rest) < 2:
            raise UsageError("expected: construct halpha M R A1..AR")
        m, r = _int(rest[0], "M"), _int(rest[1], "R")
        obj = build_H_alpha(m, r, _weights(rest[2:]))
    elif name == "galpha":
        if len(rest) < 1:
            raise UsageError("expected: construct galpha R B1..BR")
        obj = build_G_alpha(_int(rest[0], "R"), _weights(rest[1:]))
    elif name == "graphon":
        _need(rest, 0, "construct graphon (uses --seed, --blocks, --denom-bound)")
        obj = random_graphon(cfg.seed, cfg.blocks, cfg.denom_bound)
    elif name == "constant":
        _need(rest, 1, "construct constant C")
        obj = constant_graphon(_frac(rest[0], "C"))
    elif name == "kernel":
        if len(rest) < 3:
            raise UsageError("expected: construct kernel W.json M R A1..AR")
        W = _load(rest[0], StepGraphon)
        obj = product_kernel(W, _int(rest[1], "M"), _int(rest[2], "R"), _weights(rest[3:]))
    elif name == "spec":
        spec, _, left = _named_spec(rest)
        if left:
            raise UsageError("expected: construct spec galpha R | construct spec halpha M R")
        obj = spec
    elif name == "spec-blowup":
        _need(rest, 3, "construct spec-blowup SPEC.json LEVEL P")
        obj = blowup_spec(_load(rest[0], ReflectionSpec), _int(rest[1], "LEVEL"), _int(rest[2], "P"))
    elif name == "reflection":
        _need(rest, 1, "construct reflection SPEC.json")
        obj = reflection_hypergraph(_load(rest[0], ReflectionSpec))
    elif name == "hblowup":
        _need(rest, 3, "construct hblowup G.json LEVEL P")
        obj = hypergraph_blowup(_load(rest[0], PartiteHypergraph), _int(rest[1], "LEVEL"), _int(rest[2], "P"))
    else:
        raise UsageError(f"unknown construction {name!r}; {usage}")
    _emit(cfg, _dump(obj))
    return EXIT_OK


def _density_mode(cfg: CliConfig) -> str:
    return cfg.mode or "auto"


def cmd_density(cfg: CliConfig) -> int:
    usage = ("density KIND FILES; KIND is one of hom H.json W.json | oracle H.json W.json | "
             "weighted H.json W.json A1..AR | rooted H.json W.json X1..XM | edge W.json | "
             "hyper G.json K.json")
    if not cfg.args:
        raise UsageError(usage)
    kind, rest = cfg.args[0], cfg.args[1:]
    mode, prec = _density_mode(cfg), DEFAULT_PRECISION_BITS
    if kind == "hom":
        _need(rest, 2, "density hom H.json W.json")
        value = hom_density(_load(rest[0], BipartiteGraph), _load(rest[1], StepGraphon), mode, prec)
    elif kind == "oracle":
        _need(rest, 2, "density oracle H.json W.json")
        value = hom_density_oracle(_load(rest[0], BipartiteGraph), _load(rest[1], StepGraphon))
    elif kind == "weighted":
        if len(rest) < 2:
            raise UsageError("expected: density weighted H.json W.json A1..AR")
        H, W = _load(rest[0], BipartiteGraph), _load(rest[1], StepGraphon)
        value = weighted_density(H, W, _weights(rest[2:]), mode, prec)
    elif kind == "rooted":
        if len(rest) < 2:
            raise UsageError("expected: density rooted H.json W.json X1..XM (0-based blocks)")
        H, W = _load(rest[0], BipartiteGraph), _load(rest[1], StepGraphon)
        value = rooted_density(H, W, [_int(t, "block index") for t in rest[2:]])
    elif kind == "edge":
        _need(rest, 1, "density edge W.json")
        value = edge_density(_load(rest[0], StepGraphon))
    elif kind == "hyper":
        _need(rest, 2, "density hyper G.json K.json")
        value = hyper_density(_load(rest[0], PartiteHypergraph), _load_kernel(rest[1]), mode, prec)
    else:
        raise UsageError(f"unknown density kind {kind!r}; {usage}")
    out_mode = "exact" if is_exact(value) else "float"
    row = {"kind": kind, "mode": out_mode, "precision_bits": None if out_mode == "exact" else prec,
           "value": format_value(value)}
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
        writer.writeheader()
        writer.writerow(row)
        _emit(cfg, buf.getvalue())
    else:
        _emit(cfg, json.dumps(row, indent=2))
    return EXIT_OK


def cmd_check(cfg: CliConfig) -> int:
    if len(cfg.args) != 1:
        raise UsageError(f"expected: check ID with ID one of {', '.join(CHECK_IDS)}, negative_control")
    check = cfg.args[0]
    size = SizeConfig(max_blocks=cfg.blocks, denominator_bound=cfg.denom_bound,
                      graphon="mixed" if check == "negative_control" else "random")
    base = default_policy(check)
    policy = TolerancePolicy(
        mode=cfg.mode or base.mode,
        relative_tolerance=cfg.tolerance or base.relative_tolerance,
        slack=cfg.tolerance or base.slack,
        power_compatible=cfg.power_compatible,
    )
    report = run_check(check, cfg.seed, cfg.trials, size, policy, jobs=cfg.jobs)
    _emit(cfg, write_report(report, cfg.fmt))
    print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_minp(cfg: CliConfig) -> int:
    _need(cfg.args, 1, "minp H.json")
    _emit(cfg, str(minimal_blowup_exponent(_load(cfg.args[0], BipartiteGraph))))
    return EXIT_OK


def cmd_companion(cfg: CliConfig) -> int:
    _need(cfg.args, 1, "companion H.json")
    _emit(cfg, _dump(companion_graph(_load(cfg.args[0], BipartiteGraph))))
    return EXIT_OK


def cmd_reflect(cfg: CliConfig) -> int:
    """Build the reflection hypergraph; compare it with a target if one is known."""
    spec, target, left = _named_spec(cfg.args)
    if len(left) > 1:
        raise UsageError("expected: reflect SPEC [TARGET.json]")
    if left:
        target = _load(left[0], PartiteHypergraph)
    G = reflection_hypergraph(spec)
    doc = {"spec": spec.to_dict(), "hypergraph": G.to_dict(), "isomorphic": None}
    if target is not None:
        doc["isomorphic"] = partite_isomorphic(G, target)[0]
    _emit(cfg, json.dumps(doc, indent=2))
    return EXIT_FAIL if doc["isomorphic"] is False else EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "density": cmd_density,
    "check": cmd_check,
    "minp": cmd_minp,
    "companion": cmd_companion,
    "reflect": cmd_reflect,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sidorenko-blowups", description="Blow-up constructions, densities and checks.")
    p.add_argument("subcommand", choices=sorted(COMMANDS), metavar="SUBCOMMAND",
                   help="one of " + ", ".join(sorted(COMMANDS)))
    p.add_argument("args", nargs="*", help="subcommand arguments")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--blocks", type=int, default=3, help="max blocks of random graphons")
    p.add_argument("--denom-bound", type=int, default=6, help="denominator bound of random rationals")
    p.add_argument("--tolerance", type=float, default=None, help="relative tolerance and slack")
    p.add_argument("--mode", choices=("exact", "float"), default=None)
    p.add_argument("--power-compatible", action="store_true",
                   help="draw graphon values as perfect powers so fractional exponents stay rational")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for check")
    return p


def main(argv=None) -> int:
    try:
        cfg = CliConfig.from_namespace(build_parser().parse_args(argv))
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    except InputError as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
    except DivisibilityError as exc:
        print(f"divisibility error: {exc}", file=sys.stderr)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
    except ExactnessError as exc:
        print(f"exactness error: {exc} (use --mode float)", file=sys.stderr)
    except (InfeasibleSizeError, GroupCapError, IsomorphismCapError) as exc:
        print(f"infeasible size: {exc}", file=sys.stderr)
    except (GraphError, GraphonError, HypergraphError, ValueError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
