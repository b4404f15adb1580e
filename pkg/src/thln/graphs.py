"""Twisted hypercube-like networks (THLNs) and the named hypercube variants.

Vertices are plain integers in ``[0, 2**n)``; the dimension lives on the
graph.  Every graph carries a *split tree* describing its recursive
``L (+) R`` decomposition: the bit that separates the two halves at the top
level, followed by the split trees of the halves in their own local labels
(the split bit removed).  For crossed, locally twisted and Mobius cubes the
split bit is always the most significant one.  Twisted cubes split on bit
``n-2`` first, because their most significant bit does not induce two
regular halves.
"""

from __future__ import annotations

import enum
import itertools
import json
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, DimensionTooSmall, EvenDimension, NotABijection, ThlnError

# (split bit, left subtree, right subtree); None at dimension 3.
SplitTree = Optional[tuple]


class Variant(str, enum.Enum):
    GENERIC = "generic"
    CROSSED = "cq"
    LOCALLY_TWISTED = "ltq"
    MOBIUS0 = "mq0"
    MOBIUS1 = "mq1"
    TWISTED = "tq"


# Labelled 3-D THLN; identical to the crossed cube CQ_3.
BASE_EDGES_3 = (
    (0b000, 0b001), (0b000, 0b010), (0b000, 0b100), (0b001, 0b011),
    (0b001, 0b111), (0b010, 0b011), (0b010, 0b110), (0b011, 0b101),
    (0b100, 0b101), (0b100, 0b110), (0b101, 0b111), (0b110, 0b111),
)


def format_label(x: int, n: int) -> str:
    return format(x, f"0{n}b")


def parse_label(s: str, n: Optional[int] = None) -> int:
    s = s.strip()
    if not s or any(c not in "01" for c in s):
        raise ValueError(f"not a binary vertex label: {s!r}")
    if n is not None and len(s) != n:
        raise ValueError(f"label {s!r} must have width {n}")
    return int(s, 2)


def _drop_bit(x: int, bit: int) -> int:
    return ((x >> (bit + 1)) << bit) | (x & ((1 << bit) - 1))


def _insert_bit(y: int, bit: int, value: int) -> int:
    return ((y >> bit) << (bit + 1)) | (value << bit) | (y & ((1 << bit) - 1))


def msb_tree(n: int) -> SplitTree:
    if n <= 3:
        return None
    sub = msb_tree(n - 1)
    return (n - 1, sub, sub)


def twisted_tree(n: int) -> SplitTree:
    """Split tree of TQ_n for odd n: bit n-2, then bit n-1, then TQ_{n-2}."""
    if n <= 3:
        return None
    quarter = twisted_tree(n - 2)
    half = (n - 2, quarter, quarter)
    return (n - 2, half, half)


@dataclass(frozen=True, eq=False)
class CubeGraph:
    n: int
    adjacency: tuple  # adjacency[x] is the sorted tuple of neighbours of x
    variant: Variant = Variant.GENERIC
    split_tree: SplitTree = None

    def __post_init__(self):
        if self.n < 3:
            raise DimensionTooSmall(f"dimension must be >= 3, got {self.n}")
        if len(self.adjacency) != 1 << self.n:
            raise ThlnError("adjacency must list every vertex")
        if (self.split_tree is None) != (self.n == 3):
            raise ThlnError("split tree must be present exactly when n >= 4")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], variant=Variant.GENERIC,
                   split_tree: SplitTree = None) -> "CubeGraph":
        nbrs: list[set] = [set() for _ in range(1 << n)]
        for a, b in edges:
            if a == b:
                raise ThlnError(f"self-loop at {a}")
            nbrs[a].add(b)
            nbrs[b].add(a)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), Variant(variant), split_tree)

    def __eq__(self, other):
        if not isinstance(other, CubeGraph):
            return NotImplemented
        return (self.n, self.adjacency, self.split_tree) == (other.n, other.adjacency, other.split_tree)

    def __hash__(self):
        return hash((self.n, self.adjacency))

    def __repr__(self):
        return f"CubeGraph(n={self.n}, variant={self.variant.value})"

    @property
    def num_vertices(self) -> int:
        return 1 << self.n

    def vertices(self) -> range:
        return range(1 << self.n)

    def neighbors(self, x: int) -> tuple:
        return self.adjacency[x]

    def degree(self, x: int) -> int:
        return len(self.adjacency[x])

    def has_edge(self, x: int, y: int) -> bool:
        return y in self.neighbor_sets[x]

    @cached_property
    def neighbor_sets(self) -> tuple:
        return tuple(frozenset(a) for a in self.adjacency)

    def edges(self) -> Iterator[tuple[int, int]]:
        for x, nb in enumerate(self.adjacency):
            for y in nb:
                if x < y:
                    yield (x, y)

    @cached_property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges())

    @cached_property
    def neighbor_table(self) -> np.ndarray:
        """``(2**n, max_degree)`` int64 array of neighbours, padded with -1."""
        width = max(len(a) for a in self.adjacency)
        table = np.full((self.num_vertices, width), -1, dtype=np.int64)
        for x, nb in enumerate(self.adjacency):
            table[x, : len(nb)] = nb
        return table

    def label(self, x: int) -> str:
        return format_label(x, self.n)

    def vertex(self, label: Union[str, int]) -> int:
        x = parse_label(label, self.n) if isinstance(label, str) else int(label)
        if not 0 <= x < self.num_vertices:
            raise ValueError(f"vertex {label!r} out of range for n={self.n}")
        return x

    # -- L/R decomposition -------------------------------------------------

    def _require_split(self):
        if self.split_tree is None:
            raise DimensionTooSmall("a 3-dimensional THLN has no L/R decomposition")

    @property
    def split_bit(self) -> int:
        if self.split_tree is None:
            # 3-D leaf: cross edges are still defined, the halves are not
            return 1 if self.variant is Variant.TWISTED else 2
        return self.split_tree[0]

    def side(self, x: int) -> int:
        """0 for the left half, 1 for the right half."""
        return (x >> self.split_bit) & 1

    @cached_property
    def _cross(self) -> tuple:
        bit = self.split_bit
        cross = []
        for x, nb in enumerate(self.adjacency):
            s = (x >> bit) & 1
            other = [y for y in nb if (y >> bit) & 1 != s]
            if len(other) != 1:
                raise ThlnError(f"vertex {self.label(x)} has {len(other)} cross neighbours")
            cross.append(other[0])
        return tuple(cross)

    def cross_neighbor(self, x: int) -> int:
        return self._cross[x]

    @cached_property
    def phi(self) -> dict:
        """Cross matching as a map from left-local to right-local labels."""
        bit = self.split_bit
        return {_drop_bit(x, bit): _drop_bit(self._cross[x], bit)
                for x in self.vertices() if not (x >> bit) & 1}

    @cached_property
    def halves(self) -> tuple["SubcubeView", "SubcubeView"]:
        self._require_split()
        return SubcubeView(self, 0), SubcubeView(self, 1)


class SubcubeView:
    """One half of a CubeGraph, relabelled to local ``(n-1)``-bit labels.

    ``graph`` is the half materialised as a CubeGraph in local labels; use
    ``to_parent`` / ``to_local`` to move between the two labelings.
    """

    def __init__(self, parent: CubeGraph, side: int):
        parent._require_split()
        self.parent = parent
        self.side = side
        self.bit = parent.split_bit
        tree = parent.split_tree[1 + side]
        n = parent.n - 1
        adjacency = []
        for y in range(1 << n):
            x = _insert_bit(y, self.bit, side)
            adjacency.append(tuple(sorted(
                _drop_bit(z, self.bit) for z in parent.adjacency[x] if (z >> self.bit) & 1 == side)))
        self.graph = CubeGraph(n, tuple(adjacency), parent.variant, tree)

    def __repr__(self):
        return f"SubcubeView({'LR'[self.side]} of {self.parent!r})"

    def to_local(self, x: int) -> int:
        if (x >> self.bit) & 1 != self.side:
            raise ValueError(f"vertex {self.parent.label(x)} is not on side {'LR'[self.side]}")
        return _drop_bit(x, self.bit)

    def to_parent(self, y: int) -> int:
        return _insert_bit(y, self.bit, self.side)

    def contains(self, x: int) -> bool:
        return (x >> self.bit) & 1 == self.side

    def vertices(self) -> list[int]:
        return [self.to_parent(y) for y in range(self.graph.num_vertices)]


def split(g: CubeGraph) -> tuple[SubcubeView, SubcubeView]:
    return g.halves


def cross_neighbor(g: CubeGraph, x: int) -> int:
    return g.cross_neighbor(x)


# -- construction ------------------------------------------------------------


def base_thln3() -> CubeGraph:
    return CubeGraph.from_edges(3, BASE_EDGES_3, Variant.GENERIC)


def _as_mapping(phi, size: int) -> dict:
    if phi is None:
        return {x: x for x in range(size)}
    if isinstance(phi, Mapping):
        return dict(phi)
    if callable(phi):
        return {x: phi(x) for x in range(size)}
    return dict(enumerate(phi))


def compose(left: CubeGraph, right: CubeGraph, phi=None) -> CubeGraph:
    """Join two (n-1)-D THLNs with the perfect matching ``x -> phi(x)``.

    ``phi`` may be a mapping, a sequence indexed by left label, or a
    callable; it defaults to the identity.  Left labels get a leading 0,
    right labels a leading 1.
    """
    if left.n != right.n:
        raise DimensionMismatch(f"halves have dimensions {left.n} and {right.n}")
    m = left.n
    size = 1 << m
    mapping = _as_mapping(phi, size)
    if set(mapping) != set(range(size)):
        raise NotABijection("phi must be defined on every left vertex")
    if sorted(mapping.values()) != list(range(size)):
        raise NotABijection("phi is not a bijection onto the right vertex set")
    top = 1 << m
    edges = list(left.edges())
    edges += [(top | a, top | b) for a, b in right.edges()]
    edges += [(x, top | y) for x, y in mapping.items()]
    return CubeGraph.from_edges(m + 1, edges, Variant.GENERIC, (m, left.split_tree, right.split_tree))


def random_thln(n: int, rng: Union[random.Random, int, None] = None) -> CubeGraph:
    """Generic THLN with an independent random matching at every level."""
    if n < 3:
        raise DimensionTooSmall(f"dimension must be >= 3, got {n}")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    if n == 3:
        return base_thln3()
    left = random_thln(n - 1, rng)
    right = random_thln(n - 1, rng)
    perm = list(range(1 << (n - 1)))
    rng.shuffle(perm)
    return compose(left, right, perm)


def _from_rule(n: int, rule, variant: Variant, tree: SplitTree) -> CubeGraph:
    edges = set()
    for x in range(1 << n):
        for y in rule(x, n):
            edges.add((min(x, y), max(x, y)))
    return CubeGraph.from_edges(n, edges, variant, tree)


def _check_dim(n: int):
    if n < 3:
        raise DimensionTooSmall(f"dimension must be >= 3, got {n}")


def _crossed_rule(x: int, n: int):
    # Flip bit l; in every full bit pair (2i+1, 2i) below l, a set low bit
    # toggles the high bit of the pair (pair relation 00~00, 10~10, 01~11, 11~01).
    for l in range(n):
        y = x ^ (1 << l)
        for i in range(l // 2):
            if (x >> (2 * i)) & 1:
                y ^= 1 << (2 * i + 1)
        yield y


def crossed_cube(n: int) -> CubeGraph:
    _check_dim(n)
    return _from_rule(n, _crossed_rule, Variant.CROSSED, msb_tree(n))


def _locally_twisted_rule(x: int, n: int):
    yield x ^ 1
    yield x ^ 2
    for i in range(2, n):
        yield x ^ (1 << i) if x & 1 == 0 else x ^ (3 << (i - 1))


def locally_twisted_cube(n: int) -> CubeGraph:
    _check_dim(n)
    return _from_rule(n, _locally_twisted_rule, Variant.LOCALLY_TWISTED, msb_tree(n))


def mobius_cube(n: int, kind: int) -> CubeGraph:
    """0- or 1-Mobius cube.

    Along dimension i the neighbour flips bit i alone when the next more
    significant bit is 0, and flips bits i..0 when it is 1; the bit above
    the most significant one is taken to be ``kind``.
    """
    _check_dim(n)
    if kind not in (0, 1):
        raise ValueError(f"Mobius cube kind must be 0 or 1, got {kind!r}")

    def rule(x, n):
        for i in range(n):
            above = (x >> (i + 1)) & 1 if i < n - 1 else kind
            yield x ^ ((1 << (i + 1)) - 1) if above else x ^ (1 << i)

    variant = Variant.MOBIUS1 if kind else Variant.MOBIUS0
    return _from_rule(n, rule, variant, msb_tree(n))


def _twisted_rule(x: int, n: int):
    yield x ^ 1
    for i in range(1, (n - 1) // 2 + 1):
        parity = bin(x & ((1 << (2 * i - 1)) - 1)).count("1") & 1
        yield x ^ (1 << (2 * i))
        yield x ^ (1 << (2 * i - 1)) if parity else x ^ (3 << (2 * i - 1))


def twisted_cube(n: int) -> CubeGraph:
    _check_dim(n)
    if n % 2 == 0:
        raise EvenDimension("twisted cube requires odd n")
    return _from_rule(n, _twisted_rule, Variant.TWISTED, twisted_tree(n))


def make_graph(variant: Union[Variant, str], n: int, seed=None) -> CubeGraph:
    variant = Variant(variant)
    if variant is Variant.GENERIC:
        return random_thln(n, seed) if seed is not None else generic_thln(n)
    if variant is Variant.CROSSED:
        return crossed_cube(n)
    if variant is Variant.LOCALLY_TWISTED:
        return locally_twisted_cube(n)
    if variant is Variant.MOBIUS0:
        return mobius_cube(n, 0)
    if variant is Variant.MOBIUS1:
        return mobius_cube(n, 1)
    return twisted_cube(n)


def generic_thln(n: int) -> CubeGraph:
    """Generic THLN built with identity matchings at every level."""
    _check_dim(n)
    g = base_thln3()
    for _ in range(n - 3):
        g = compose(g, g)
    return g


def default_tree(variant: Variant, n: int) -> SplitTree:
    return twisted_tree(n) if Variant(variant) is Variant.TWISTED else msb_tree(n)


# -- structural checks -------------------------------------------------------


def check_invariants(g: CubeGraph, recursive: bool = True) -> None:
    """Raise ThlnError unless ``g`` satisfies the THLN structural invariants."""
    n = g.n
    for x, nb in enumerate(g.adjacency):
        if len(nb) != n:
            raise ThlnError(f"vertex {g.label(x)} has degree {len(nb)}, expected {n}")
        if x in nb or len(set(nb)) != len(nb):
            raise ThlnError(f"vertex {g.label(x)} has a loop or multi-edge")
        for y in nb:
            if x not in g.neighbor_sets[y]:
                raise ThlnError(f"edge {g.label(x)}-{g.label(y)} is not symmetric")
    if g.num_edges != n << (n - 1):
        raise ThlnError(f"edge count {g.num_edges} != {n << (n - 1)}")
    if not is_connected(g):
        raise ThlnError("graph is disconnected")
    if n == 3 and not _is_base_3(g.edge_set):
        raise ThlnError("3-D graph is not isomorphic to the base THLN")
    cross = g._cross  # raises unless every vertex has exactly one cross neighbour
    bit = g.split_bit
    if any(cross[cross[x]] != x for x in g.vertices()):
        raise ThlnError("cross edges are not a matching")
    left = sum(1 for x in g.vertices() if not (x >> bit) & 1)
    if left != 1 << (n - 1):
        raise ThlnError("halves have unequal size")
    if recursive and n > 3:
        for half in g.halves:
            check_invariants(half.graph, recursive=True)


def is_connected(g: CubeGraph) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == g.num_vertices


_BASE_3_CACHE: dict = {}


def _is_base_3(edge_set: frozenset) -> bool:
    if edge_set not in _BASE_3_CACHE:
        _BASE_3_CACHE[edge_set] = is_isomorphic(CubeGraph.from_edges(3, edge_set), base_thln3())
    return _BASE_3_CACHE[edge_set]


def cross_edges(g: CubeGraph) -> list[tuple[int, int]]:
    bit = g.split_bit
    return [(x, g.cross_neighbor(x)) for x in g.vertices() if not (x >> bit) & 1]


def is_isomorphic(a: CubeGraph, b: CubeGraph) -> bool:
    """Brute-force isomorphism test; intended for 3-D graphs (8! maps)."""
    if a.n != b.n or a.num_edges != b.num_edges:
        return False
    if a.n > 3:
        raise ValueError("brute-force isomorphism is limited to n = 3")
    ea = a.edge_set
    target = b.edge_set
    for perm in itertools.permutations(range(a.num_vertices)):
        if all((min(perm[x], perm[y]), max(perm[x], perm[y])) in target for x, y in ea):
            return True
    return False


# -- serialisation -----------------------------------------------------------


def to_json(g: CubeGraph) -> str:
    doc = {
        "n": g.n,
        "variant": g.variant.value,
        "edges": [[g.label(x), g.label(y)] for x, y in sorted(g.edges())],
    }
    if g.split_tree != default_tree(g.variant, g.n):
        doc["split_tree"] = g.split_tree
    return json.dumps(doc)


def from_json(text: Union[str, bytes]) -> CubeGraph:
    doc = json.loads(text)
    n = int(doc["n"])
    variant = Variant(doc.get("variant", "generic"))
    tree = doc.get("split_tree")
    tree = _tree_from_json(tree) if tree is not None else default_tree(variant, n)
    edges = [(parse_label(a, n), parse_label(b, n)) for a, b in doc["edges"]]
    return CubeGraph.from_edges(n, edges, variant, tree)


def _tree_from_json(t) -> SplitTree:
    if t is None:
        return None
    return (int(t[0]), _tree_from_json(t[1]), _tree_from_json(t[2]))


def to_dot(g: CubeGraph) -> str:
    lines = [f'graph "{g.variant.value}{g.n}" {{']
    lines += [f'  "{g.label(x)}";' for x in g.vertices()]
    lines += [f'  "{g.label(x)}" -- "{g.label(y)}";' for x, y in sorted(g.edges())]
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(g: CubeGraph, fmt: str = "json") -> bytes:
    fmt = fmt.lower()
    if fmt == "json":
        return to_json(g).encode()
    if fmt == "dot":
        return to_dot(g).encode()
    raise ValueError(f"unknown export format {fmt!r}")


def edge_labels(g: CubeGraph) -> set[tuple[str, str]]:
    """Edge set as sorted label pairs, convenient for fixture comparison."""
    return {(g.label(x), g.label(y)) for x, y in g.edges()}


def relabel_path(view: SubcubeView, path: Sequence[int]) -> list[int]:
    return [view.to_parent(y) for y in path]
