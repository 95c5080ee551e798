"""Partite hypergraphs with labelled vertex classes."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence


class HypergraphError(ValueError):
    pass


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(y) for y in x)
    return x


def _thaw(x):
    if isinstance(x, tuple):
        return [_thaw(y) for y in x]
    return x


@dataclass(frozen=True)
class PartiteHypergraph:
    """Vertex classes indexed by ``levels``; an edge picks one vertex per class.

    ``edges[e][j]`` is the index, within ``classes[j]``, of the vertex that
    edge ``e`` takes from level ``levels[j]``.  Edges are kept sorted and
    duplicate-free.
    """

    levels: tuple[int, ...]
    classes: tuple[tuple[Hashable, ...], ...]
    edges: tuple[tuple[int, ...], ...]

    def __init__(self, levels: Sequence[int], classes: Sequence[Sequence[Hashable]],
                 edges: Iterable[Sequence[int]]):
        levels = tuple(int(k) for k in levels)
        classes = tuple(tuple(c) for c in classes)
        if len(set(levels)) != len(levels):
            raise HypergraphError(f"repeated level in {levels}")
        if len(classes) != len(levels):
            raise HypergraphError("need exactly one vertex class per level")
        for lvl, cls in zip(levels, classes):
            if len(set(cls)) != len(cls):
                raise HypergraphError(f"duplicate vertex label in class of level {lvl}")
        edge_set = set()
        for e in edges:
            e = tuple(int(i) for i in e)
            if len(e) != len(levels):
                raise HypergraphError(f"edge {e} does not pick one vertex per level")
            for j, i in enumerate(e):
                if not 0 <= i < len(classes[j]):
                    raise HypergraphError(f"edge {e} has out-of-range index at level {levels[j]}")
            if e in edge_set:
                raise HypergraphError(f"duplicate edge {e}")
            edge_set.add(e)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "edges", tuple(sorted(edge_set)))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_vertices(self) -> int:
        return sum(len(c) for c in self.classes)

    def position(self, level: int) -> int:
        try:
            return self.levels.index(level)
        except ValueError:
            raise HypergraphError(f"level {level} not present (levels {self.levels})") from None

    def class_of(self, level: int) -> tuple:
        return self.classes[self.position(level)]

    def class_sizes(self) -> dict[int, int]:
        return {lvl: len(c) for lvl, c in zip(self.levels, self.classes)}

    def degrees(self, level: int) -> list[int]:
        j = self.position(level)
        deg = [0] * len(self.classes[j])
        for e in self.edges:
            deg[e[j]] += 1
        return deg

    def induced(self, keep: Mapping[int, Iterable[Hashable]]) -> "PartiteHypergraph":
        """Sub-hypergraph induced on the given labels (per level); all levels kept."""
        new_classes, remap = [], []
        for lvl, cls in zip(self.levels, self.classes):
            wanted = set(keep.get(lvl, ()))
            old = [i for i, lab in enumerate(cls) if lab in wanted]
            idx = {i: n for n, i in enumerate(old)}
            kept = [cls[i] for i in old]
            new_classes.append(kept)
            remap.append(idx)
        edges = []
        for e in self.edges:
            if all(i in remap[j] for j, i in enumerate(e)):
                edges.append(tuple(remap[j][i] for j, i in enumerate(e)))
        return PartiteHypergraph(self.levels, new_classes, edges)

    def relabelled(self, perms: Sequence[Sequence[int]]) -> "PartiteHypergraph":
        """Reorder each class: new class j lists old vertices perms[j][0], perms[j][1], ..."""
        inv = []
        for perm in perms:
            d = {old: new for new, old in enumerate(perm)}
            inv.append(d)
        classes = [[cls[old] for old in perm] for cls, perm in zip(self.classes, perms)]
        edges = [tuple(inv[j][i] for j, i in enumerate(e)) for e in self.edges]
        return PartiteHypergraph(self.levels, classes, edges)

    def to_dict(self) -> dict:
        return {
            "levels": list(self.levels),
            "classes": [[_thaw(lab) for lab in cls] for cls in self.classes],
            "edges": [{str(lvl): i for lvl, i in zip(self.levels, e)} for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "PartiteHypergraph":
        try:
            levels = [int(k) for k in data["levels"]]
            classes = [[_freeze(lab) for lab in c] for c in data["classes"]]
            edges = [tuple(int(e[str(lvl)]) for lvl in levels) for e in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise HypergraphError(f"malformed hypergraph document: {exc}") from exc
        return cls(levels, classes, edges)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "PartiteHypergraph":
        return cls.from_dict(json.loads(text))
