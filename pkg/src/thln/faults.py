"""Fault sets, survivor-graph queries and weak/normal pair classification."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Union

import numpy as np

from .errors import EmptySurvivor, FaultyQueryVertex, InvalidFaultSet, OverlayConflict
from .graphs import CubeGraph, SubcubeView


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class FaultSet:
    """Faulty vertices and edges.

    An edge fault may coexist with a fault of one of its endpoints; both
    count towards ``size``.
    """

    vertices: frozenset = frozenset()
    edges: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(int(x) for x in self.vertices))
        object.__setattr__(self, "edges", frozenset(_edge(int(a), int(b)) for a, b in self.edges))

    @classmethod
    def build(cls, graph: CubeGraph, vertices: Iterable[int] = (), edges: Iterable = ()) -> "FaultSet":
        fs = cls(frozenset(vertices), frozenset(edges))
        fs.validate(graph)
        return fs

    def validate(self, graph: CubeGraph) -> None:
        for x in self.vertices:
            if not 0 <= x < graph.num_vertices:
                raise InvalidFaultSet(f"faulty vertex {x} is not in the graph")
        for a, b in self.edges:
            if not (0 <= a < graph.num_vertices and graph.has_edge(a, b)):
                raise InvalidFaultSet(f"faulty edge ({a}, {b}) is not in the graph")

    @property
    def f_v(self) -> int:
        return len(self.vertices)

    @property
    def f_e(self) -> int:
        return len(self.edges)

    @property
    def size(self) -> int:
        return len(self.vertices) + len(self.edges)

    def __len__(self):
        return self.size

    def with_vertices(self, add: Iterable[int] = (), remove: Iterable[int] = ()) -> "FaultSet":
        return FaultSet((self.vertices - frozenset(remove)) | frozenset(add), self.edges)

    def with_edges(self, add: Iterable = (), remove: Iterable = ()) -> "FaultSet":
        drop = {_edge(*e) for e in remove}
        return FaultSet(self.vertices, (self.edges - drop) | {_edge(*e) for e in add})

    def edge_faulty(self, a: int, b: int) -> bool:
        return _edge(a, b) in self.edges

    # -- halves ------------------------------------------------------------

    def split_counts(self, graph: CubeGraph) -> dict:
        """Per-half counts: ``F_L``, ``F_R``, ``F_C`` and ``fv_L``, ``fv_R``.

        ``F_L`` counts faulty vertices of L plus faulty edges inside L;
        ``F_C`` counts faulty cross edges.
        """
        side = graph.side
        fv = [0, 0]
        fe = [0, 0]
        fc = 0
        for x in self.vertices:
            fv[side(x)] += 1
        for a, b in self.edges:
            sa, sb = side(a), side(b)
            if sa != sb:
                fc += 1
            else:
                fe[sa] += 1
        return {"F_L": fv[0] + fe[0], "F_R": fv[1] + fe[1], "F_C": fc, "fv_L": fv[0], "fv_R": fv[1]}

    def restrict(self, view: SubcubeView) -> "FaultSet":
        """The faults lying inside one half, in that half's local labels."""
        verts = [view.to_local(x) for x in self.vertices if view.contains(x)]
        edges = [(view.to_local(a), view.to_local(b)) for a, b in self.edges
                 if view.contains(a) and view.contains(b)]
        return FaultSet(frozenset(verts), frozenset(edges))

    # -- serialisation -----------------------------------------------------

    def to_dict(self, graph: CubeGraph) -> dict:
        return {
            "vertices": sorted(graph.label(x) for x in self.vertices),
            "edges": sorted([graph.label(a), graph.label(b)] for a, b in self.edges),
        }

    def to_json(self, graph: CubeGraph) -> str:
        return json.dumps(self.to_dict(graph))

    @classmethod
    def from_dict(cls, graph: CubeGraph, doc: dict) -> "FaultSet":
        verts = [graph.vertex(s) for s in doc.get("vertices", [])]
        edges = [(graph.vertex(a), graph.vertex(b)) for a, b in doc.get("edges", [])]
        return cls.build(graph, verts, edges)

    @classmethod
    def from_json(cls, graph: CubeGraph, text: Union[str, bytes]) -> "FaultSet":
        return cls.from_dict(graph, json.loads(text))


def parse_inline(graph: CubeGraph, spec: str) -> FaultSet:
    """Parse ``v:00101,e:00101-00111`` style fault lists."""
    verts, edges = [], []
    for item in filter(None, (s.strip() for s in spec.split(","))):
        kind, _, body = item.partition(":")
        if kind == "v":
            verts.append(graph.vertex(body))
        elif kind == "e":
            a, _, b = body.partition("-")
            edges.append((graph.vertex(a), graph.vertex(b)))
        else:
            raise ValueError(f"bad fault item {item!r}; expected v:<label> or e:<label>-<label>")
    return FaultSet.build(graph, verts, edges)


def fault_elements(graph: CubeGraph) -> list:
    """Every vertex and edge of ``graph`` as ``("v", x)`` / ``("e", (a, b))``."""
    return [("v", x) for x in graph.vertices()] + [("e", e) for e in sorted(graph.edges())]


def from_elements(elements: Iterable) -> FaultSet:
    verts = [x for kind, x in elements if kind == "v"]
    edges = [x for kind, x in elements if kind == "e"]
    return FaultSet(frozenset(verts), frozenset(edges))


def random_fault_set(graph: CubeGraph, k: int, rng: random.Random) -> FaultSet:
    """``k`` distinct elements drawn uniformly from V ∪ E."""
    n_v = graph.num_vertices
    edges = sorted(graph.edges())
    picks = rng.sample(range(n_v + len(edges)), k)
    verts = [i for i in picks if i < n_v]
    chosen = [edges[i - n_v] for i in picks if i >= n_v]
    return FaultSet(frozenset(verts), frozenset(chosen))


# -- survivor graph ----------------------------------------------------------


@dataclass(frozen=True)
class SurvivorView:
    """Read-only view of G - F, optionally with temporary re-markings.

    ``unfaulted`` vertices are treated as faultless and ``extra_faulty`` as
    faulty; the underlying FaultSet is never modified.
    """

    graph: CubeGraph
    faults: FaultSet = field(default_factory=FaultSet)
    unfaulted: frozenset = frozenset()
    extra_faulty: frozenset = frozenset()

    @cached_property
    def faulty_vertices(self) -> frozenset:
        return (self.faults.vertices - self.unfaulted) | self.extra_faulty

    @cached_property
    def effective_faults(self) -> FaultSet:
        return FaultSet(self.faulty_vertices, self.faults.edges)

    def is_faulty(self, x: int) -> bool:
        return x in self.faulty_vertices

    def edge_ok(self, a: int, b: int) -> bool:
        return _edge(a, b) not in self.faults.edges

    def neighbors(self, x: int) -> list[int]:
        bad = self.faulty_vertices
        edges = self.faults.edges
        return [y for y in self.graph.adjacency[x] if y not in bad and _edge(x, y) not in edges]

    def alive(self) -> list[int]:
        bad = self.faulty_vertices
        return [x for x in self.graph.vertices() if x not in bad]

    def with_overlay(self, mark_faultless: Iterable[int] = (), mark_faulty: Iterable[int] = ()) -> "SurvivorView":
        mark_faultless = frozenset(mark_faultless)
        mark_faulty = frozenset(mark_faulty)
        bad = self.faulty_vertices
        if mark_faultless & mark_faulty:
            raise OverlayConflict("a vertex cannot be marked both faulty and faultless")
        if not mark_faultless <= bad:
            raise OverlayConflict("only faulty vertices can be marked faultless")
        if mark_faulty & bad:
            raise OverlayConflict("only faultless vertices can be marked faulty")
        base = self.faults.vertices
        unfaulted = (self.unfaulted - mark_faulty) | (mark_faultless & base)
        extra = (self.extra_faulty - mark_faultless) | (mark_faulty - base)
        return SurvivorView(self.graph, self.faults, frozenset(unfaulted), frozenset(extra))

    def restrict(self, view: SubcubeView) -> "SurvivorView":
        """The survivor view of one half, in local labels."""
        return SurvivorView(view.graph, self.effective_faults.restrict(view))

    @cached_property
    def search_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """``(neighbour table, alive mask)`` with dead edges set to -1."""
        table = self.graph.neighbor_table.copy()
        alive = np.ones(self.graph.num_vertices, dtype=np.bool_)
        alive[list(self.faulty_vertices)] = False
        table[~alive[table]] = -1
        for a, b in self.faults.edges:
            table[a][table[a] == b] = -1
            table[b][table[b] == a] = -1
        return table, alive


def survivor_degree(view: SurvivorView, x: int) -> int:
    if view.is_faulty(x):
        raise FaultyQueryVertex(f"vertex {view.graph.label(x)} is faulty")
    return len(view.neighbors(x))


def min_survivor_degree(view: SurvivorView) -> int:
    alive = view.alive()
    if not alive:
        raise EmptySurvivor("every vertex is faulty")
    return min(len(view.neighbors(x)) for x in alive)


@dataclass(frozen=True)
class PairClass:
    kind: str  # "normal" or "weak"
    witness: Optional[int] = None

    @property
    def is_weak(self) -> bool:
        return self.kind == "weak"

    @property
    def alpha(self) -> int:
        return 1 if self.is_weak else 0


NORMAL = PairClass("normal")


def find_weak_vertices(view: SurvivorView) -> list[tuple[int, tuple[int, int]]]:
    """Faultless vertices of survivor degree exactly 2, with their neighbour pairs."""
    out = []
    for x in view.alive():
        nb = view.neighbors(x)
        if len(nb) == 2:
            out.append((x, (nb[0], nb[1])))
    return out


def classify_pair(view: SurvivorView, u: int, v: int) -> PairClass:
    if u == v:
        raise ValueError("pair endpoints must differ")
    for x in (u, v):
        if view.is_faulty(x):
            raise FaultyQueryVertex(f"vertex {view.graph.label(x)} is faulty")
    # A weak witness is a common survivor neighbour of u and v.
    common = set(view.neighbors(u)) & set(view.neighbors(v))
    for w in sorted(common):
        if len(view.neighbors(w)) == 2:
            return PairClass("weak", w)
    return NORMAL
