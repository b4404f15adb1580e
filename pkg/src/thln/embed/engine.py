"""Fault-free paths of every length between two vertices of a faulty THLN.

For ``n >= 6`` the graph is split into halves and the path is assembled
from paths inside the halves, one case per fault distribution; the halves
are solved recursively.  At ``n = 5`` an exhaustive search takes over.

Internally every half is handled as a standalone CubeGraph in local labels
(see ``SubcubeView``); the heavier half, with more faulty elements, plays the
role of ``L`` below.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import (BudgetExceeded, DimensionTooSmall, FaultyQueryVertex, InvalidLength,
                      NoPathFound, WeakPairRequested)
from ..faults import FaultSet, SurvivorView, classify_pair, min_survivor_degree
from ..graphs import CubeGraph, SubcubeView
from .search import find_path

BASE_DIMENSION = 5


@dataclass(frozen=True)
class PathResult:
    vertices: tuple
    case_trace: tuple = ()
    swaps: tuple = ()  # Case 2.2 edge-for-vertex trades, as label dicts

    @property
    def u(self) -> int:
        return self.vertices[0]

    @property
    def v(self) -> int:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def to_dict(self, graph: CubeGraph) -> dict:
        return {
            "u": graph.label(self.u),
            "v": graph.label(self.v),
            "l": self.length,
            "vertices": [graph.label(x) for x in self.vertices],
            "case_trace": list(self.case_trace),
            **({"swaps": list(self.swaps)} if self.swaps else {}),
        }


@dataclass(frozen=True)
class EmbedRequest:
    graph: CubeGraph
    faults: FaultSet
    u: int
    v: int
    l: int


def _instance(graph, faults, u, v, l) -> dict:
    return {
        "n": graph.n,
        "variant": graph.variant.value,
        "faults": faults.to_dict(graph),
        "u": graph.label(u),
        "v": graph.label(v),
        "l": l,
    }


def _check_pair(graph: CubeGraph, faults: FaultSet, u: int, v: int):
    if u == v:
        raise ValueError("endpoints must differ")
    for x in (u, v):
        if not 0 <= x < graph.num_vertices:
            raise ValueError(f"vertex {x} out of range")
        if x in faults.vertices:
            raise FaultyQueryVertex(f"vertex {graph.label(x)} is faulty")


def length_range(graph: CubeGraph, faults: FaultSet, u: int, v: int) -> tuple[int, int]:
    n = graph.n
    if n < BASE_DIMENSION:
        raise DimensionTooSmall(f"path embedding needs n >= {BASE_DIMENSION}, got {n}")
    if faults.size > n - 2:
        raise BudgetExceeded(f"|F| = {faults.size} exceeds n - 2 = {n - 2}")
    _check_pair(graph, faults, u, v)
    alpha = classify_pair(SurvivorView(graph, faults), u, v).alpha
    return (1 << (n - 1)) - 1, (1 << n) - faults.f_v - 1 - alpha


def _search(graph: CubeGraph, faults: FaultSet, u: int, v: int, l: int) -> Optional[list]:
    table, alive = SurvivorView(graph, faults).search_tables
    return find_path(table, alive, u, v, l)


def base_case_solve(graph: CubeGraph, faults: FaultSet, u: int, v: int, l: int) -> "PathResult":
    """Exhaustive backtracking search for a path of exactly ``l`` edges at n = 5.

    Failure here is definitive for the instance and is reported with it.
    """
    if graph.n != BASE_DIMENSION:
        raise DimensionTooSmall(f"the base case is n = {BASE_DIMENSION}, got {graph.n}")
    _check_pair(graph, faults, u, v)
    if l < 1:
        raise InvalidLength(f"length must be positive, got {l}")
    path = _search(graph, faults, u, v, l)
    if path is None:
        raise NoPathFound(f"no fault-free path of length {l} exists",
                          instance=_instance(graph, faults, u, v, l))
    return PathResult(tuple(path), ("base",))


def hamiltonian_path(graph: CubeGraph, faults: FaultSet, u: int, v: int) -> "PathResult":
    """Path through every faultless vertex, for a normal pair and |F| <= n-2."""
    n = graph.n
    if faults.size > n - 2:
        raise BudgetExceeded(f"|F| = {faults.size} exceeds n - 2 = {n - 2}")
    _check_pair(graph, faults, u, v)
    pc = classify_pair(SurvivorView(graph, faults), u, v)
    if pc.is_weak:
        raise WeakPairRequested(
            f"({graph.label(u)}, {graph.label(v)}) is a weak pair with witness {graph.label(pc.witness)}")
    l = (1 << n) - faults.f_v - 1
    path = _search(graph, faults, u, v, l)
    if path is None:
        raise NoPathFound("no fault-free Hamiltonian path found for a normal pair",
                          instance=_instance(graph, faults, u, v, l))
    return PathResult(tuple(path), ("hamiltonian",))


# -- recursive construction ----------------------------------------------------


def _split_lengths(l: int, extra: int, first: tuple[int, int], second: tuple[int, int]) -> tuple[int, int]:
    """Pick ``(a, b)`` with ``a + b + extra == l`` inside both ranges, ``a`` maximal."""
    a = min(first[1], l - extra - second[0])
    b = l - extra - a
    assert first[0] <= a <= first[1] and second[0] <= b <= second[1], (l, extra, first, second)
    return a, b


@dataclass
class _Log:
    trace: list = field(default_factory=list)
    swaps: list = field(default_factory=list)

    def result(self, path) -> PathResult:
        return PathResult(tuple(path), tuple(self.trace), tuple(self.swaps))


@dataclass
class _Ctx:
    """One level of the recursion: the graph, its halves and fault split."""

    graph: CubeGraph
    faults: FaultSet
    log: _Log = field(default_factory=_Log)

    def __post_init__(self):
        g = self.graph
        self.n = g.n
        self.counts = self.faults.split_counts(g)
        left, right = g.halves
        # heavy half first
        if self.counts["F_R"] > self.counts["F_L"]:
            self.heavy, self.light = right, left
            self.f_heavy, self.f_light = self.counts["F_R"], self.counts["F_L"]
        else:
            self.heavy, self.light = left, right
            self.f_heavy, self.f_light = self.counts["F_L"], self.counts["F_R"]
        self.lo = (1 << (self.n - 2)) - 1  # shortest length promised in a half

    def half_of(self, x: int) -> SubcubeView:
        return self.heavy if self.heavy.contains(x) else self.light

    def other(self, half: SubcubeView) -> SubcubeView:
        return self.light if half is self.heavy else self.heavy

    def local_faults(self, half: SubcubeView) -> FaultSet:
        return self.faults.restrict(half)

    def hi(self, half: SubcubeView, local: FaultSet) -> int:
        """Longest length usable in ``half`` for any pair, weak or not."""
        m = self.n - 1
        weak_possible = local.size >= m - 2
        return (1 << m) - local.f_v - 1 - (1 if weak_possible else 0)

    def cross_ok(self, a: int) -> bool:
        b = self.graph.cross_neighbor(a)
        return (a not in self.faults.vertices and b not in self.faults.vertices
                and not self.faults.edge_faulty(a, b))

    def sub(self, half: SubcubeView, local: FaultSet, a: int, b: int, length: int) -> list:
        """Path inside ``half`` between parent vertices ``a`` and ``b``."""
        assert local.size <= half.graph.n - 2, "inductive call over fault budget"
        path = _embed(half.graph, local, half.to_local(a), half.to_local(b), length, self.log)
        return [half.to_parent(y) for y in path]


def _embed(graph: CubeGraph, faults: FaultSet, u: int, v: int, l: int, log: _Log) -> list:
    n = graph.n
    if n == BASE_DIMENSION:
        log.trace.append("base")
        path = _search(graph, faults, u, v, l)
        if path is None:
            raise NoPathFound(f"base-case search found no path of length {l}",
                              instance=_instance(graph, faults, u, v, l))
        return path
    view = SurvivorView(graph, faults)
    pc = classify_pair(view, u, v)
    top = (1 << n) - faults.f_v - 1
    assert (1 << (n - 1)) - 1 <= l <= top - pc.alpha, "length outside the guaranteed range"
    if l == top:
        log.trace.append("hamiltonian")
        path = _search(graph, faults, u, v, l)
        if path is None:
            raise NoPathFound("Hamiltonian search failed for a normal pair",
                              instance=_instance(graph, faults, u, v, l))
        return path
    ctx = _Ctx(graph, faults, log)
    if ctx.f_heavy <= n - 3:
        return _balanced(ctx, u, v, l)
    return _heavy(ctx, u, v, l)


def _balanced(ctx: _Ctx, u: int, v: int, l: int) -> list:
    g = ctx.graph
    n = ctx.n
    hu = ctx.half_of(u)
    hv = ctx.half_of(v)
    if hu is hv:
        # both ends in one half: splice a detour through the other half
        ctx.log.trace.append("1.1")
        inner, outer = hu, ctx.other(hu)
        f_in, f_out = ctx.local_faults(inner), ctx.local_faults(outer)
        l_in, l_out = _split_lengths(l, 1, (ctx.lo, ctx.hi(inner, f_in)), (ctx.lo, ctx.hi(outer, f_out)))
        path = ctx.sub(inner, f_in, u, v, l_in)
        assert (l_in + 1) // 2 - (n - 2) >= 4 or n < 6
        cands = sorted(((min(a, b), max(a, b)), i) for i, (a, b) in enumerate(zip(path, path[1:])))
        for _, i in cands:
            a, b = path[i], path[i + 1]
            if ctx.cross_ok(a) and ctx.cross_ok(b):
                break
        else:
            raise NoPathFound("no usable edge on the inner path (case 1.1)",
                              instance=_instance(g, ctx.faults, u, v, l))
        detour = ctx.sub(outer, f_out, g.cross_neighbor(a), g.cross_neighbor(b), l_out)
        return path[: i + 1] + detour + path[i + 1:]

    # ends in opposite halves: join through one cross edge
    ctx.log.trace.append("1.2")
    f_u, f_v = ctx.local_faults(hu), ctx.local_faults(hv)
    l_ua, l_bv = _split_lengths(l, 1, (ctx.lo, ctx.hi(hu, f_u)), (ctx.lo, ctx.hi(hv, f_v)))
    assert (1 << (n - 1)) - (n - 2) >= 28 or n < 6
    for a in sorted(hu.vertices()):
        b = g.cross_neighbor(a)
        if a != u and b != v and ctx.cross_ok(a):
            break
    else:
        raise NoPathFound("no usable cross edge (case 1.2)", instance=_instance(g, ctx.faults, u, v, l))
    return ctx.sub(hu, f_u, u, a, l_ua) + ctx.sub(hv, f_v, b, v, l_bv)


def _heavy(ctx: _Ctx, u: int, v: int, l: int) -> list:
    """All n-2 faults lie in one half (called L here); the other half R is clean."""
    L, R = ctx.heavy, ctx.light
    faulty_in_L = sorted(x for x in ctx.faults.vertices if L.contains(x))
    if not faulty_in_L:
        return _edges_only(ctx, u, v, l)
    x = faulty_in_L[0]
    in_L = L.contains(u), L.contains(v)
    if all(in_L):
        return _case_211(ctx, u, v, l, x)
    if in_L[0]:
        return _case_212(ctx, u, v, l, x)
    if in_L[1]:
        return _case_212(ctx, v, u, l, x)[::-1]
    return _case_213(ctx, u, v, l, x)


def _unfault(ctx: _Ctx, half: SubcubeView, x: int) -> FaultSet:
    return ctx.local_faults(half).with_vertices(remove=[half.to_local(x)])


def _clean(ctx: _Ctx, half: SubcubeView, *extra: int) -> FaultSet:
    return FaultSet(frozenset(half.to_local(y) for y in extra))


def _pick_edge(path: list, lo: int, hi: int) -> int:
    """Index i of the edge (path[i], path[i+1]) with lo <= i < hi, first by label."""
    return min(range(lo, hi), key=lambda i: (min(path[i], path[i + 1]), max(path[i], path[i + 1])))


def _case_211(ctx: _Ctx, u: int, v: int, l: int, x: int) -> list:
    ctx.log.trace.append("2.1.1")
    g, L, R = ctx.graph, ctx.heavy, ctx.light
    m = ctx.n - 1
    f1 = _unfault(ctx, L, x)
    l1, l2 = _split_lengths(l, 0, (ctx.lo, ctx.hi(L, f1)), (ctx.lo, (1 << m) - 1))
    path = ctx.sub(L, f1, u, v, l1)
    if x in path:
        k = path.index(x)
    else:
        k = min(range(1, len(path) - 1), key=lambda i: path[i])
    a, b = path[k - 1], path[k + 1]
    detour = ctx.sub(R, _clean(ctx, R), g.cross_neighbor(a), g.cross_neighbor(b), l2)
    return path[:k] + detour + path[k + 1:]


def _case_212(ctx: _Ctx, u: int, v: int, l: int, x: int) -> list:
    # u in L, v in R
    g, L, R = ctx.graph, ctx.heavy, ctx.light
    m = ctx.n - 1
    f1 = _unfault(ctx, L, x)
    hi1 = ctx.hi(L, f1)
    # one length for P_ux that suits both sub-cases
    l1 = min(hi1, l - 1 - ctx.lo)
    assert l1 >= ctx.lo
    path = ctx.sub(L, f1, u, x, l1)
    x1 = path[-2]
    if g.cross_neighbor(x1) == v:
        ctx.log.trace.append("2.1.2.1")
        l2 = l - 1 - l1
        assert ctx.lo <= l2 <= (1 << m) - 2
        i = _pick_edge(path, 1, len(path) - 3)
        a, b = path[i], path[i + 1]
        detour = ctx.sub(R, _clean(ctx, R, v), g.cross_neighbor(a), g.cross_neighbor(b), l2)
        return path[: i + 1] + detour + path[i + 1: -1] + [v]
    ctx.log.trace.append("2.1.2.2")
    l2 = l - l1
    assert ctx.lo <= l2 <= (1 << m) - 1
    tail = ctx.sub(R, _clean(ctx, R), g.cross_neighbor(x1), v, l2)
    return path[:-1] + tail


def _case_213(ctx: _Ctx, u: int, v: int, l: int, x: int) -> list:
    # u, v in the clean half R
    g, L, R = ctx.graph, ctx.heavy, ctx.light
    m = ctx.n - 1
    if l == (1 << m) - 1:
        ctx.log.trace.append("2.1.3")
        return ctx.sub(R, _clean(ctx, R), u, v, l)
    fv = ctx.faults.vertices
    if g.cross_neighbor(u) in fv or g.cross_neighbor(v) in fv:
        if g.cross_neighbor(u) not in fv:
            return _case_2131(ctx, v, u, l)[::-1]
        return _case_2131(ctx, u, v, l)
    return _case_2132(ctx, u, v, l, x)


def _case_2131(ctx: _Ctx, u: int, v: int, l: int) -> list:
    ctx.log.trace.append("2.1.3.1")
    g, L, R = ctx.graph, ctx.heavy, ctx.light
    m = ctx.n - 1
    uL = g.cross_neighbor(u)
    f1 = _unfault(ctx, L, uL)
    for v1 in g.neighbors(v):
        if R.contains(v1) and v1 != u and g.cross_neighbor(v1) not in ctx.faults.vertices:
            break
    else:
        raise NoPathFound("no neighbour v1 of v with a faultless cross partner (case 2.1.3.1)",
                          instance=_instance(g, ctx.faults, u, v, l))
    v1L = g.cross_neighbor(v1)
    l1 = min(ctx.hi(L, f1), l - 2 - ctx.lo)
    assert l1 >= ctx.lo
    path = ctx.sub(L, f1, uL, v1L, l1)
    u1 = path[1]
    if g.cross_neighbor(u1) != v:
        l2 = l - 2 - l1
        assert ctx.lo <= l2 <= (1 << m) - 3
        head = ctx.sub(R, _clean(ctx, R, v1, v), u, g.cross_neighbor(u1), l2)
        return head + path[1:] + [v1, v]
    l2 = l - 1 - l1
    assert ctx.lo <= l2 <= (1 << m) - 2
    head = ctx.sub(R, _clean(ctx, R, v), u, v1, l2)
    return head + path[:0:-1] + [v]


def _case_2132(ctx: _Ctx, u: int, v: int, l: int, x: int) -> list:
    ctx.log.trace.append("2.1.3.2")
    g, L, R = ctx.graph, ctx.heavy, ctx.light
    m = ctx.n - 1
    vL = g.cross_neighbor(v)
    f1 = _unfault(ctx, L, x)
    l1 = min(ctx.hi(L, f1), l - 2 - ctx.lo)
    assert l1 >= ctx.lo
    path = ctx.sub(L, f1, x, vL, l1)
    x1 = path[1]
    if g.cross_neighbor(x1) == u:
        l2 = l - 2 - l1
        assert ctx.lo <= l2 <= (1 << m) - 3
        i = _pick_edge(path, 2, len(path) - 2)
        a, b = path[i], path[i + 1]
        detour = ctx.sub(R, _clean(ctx, R, u, v), g.cross_neighbor(a), g.cross_neighbor(b), l2)
        return [u] + path[1: i + 1] + detour + path[i + 1:] + [v]
    l2 = l - 1 - l1
    assert ctx.lo <= l2 <= (1 << m) - 2
    head = ctx.sub(R, _clean(ctx, R, v), u, g.cross_neighbor(x1), l2)
    return head + path[1:] + [v]


def _edges_only(ctx: _Ctx, u: int, v: int, l: int) -> list:
    """Trade one faulty edge for a faulty vertex that already isolates it."""
    g, faults = ctx.graph, ctx.faults
    view = SurvivorView(g, faults)
    degree = {x: len(view.neighbors(x)) for x in g.vertices()}
    delta = min(degree.values())
    for x in sorted(y for y, d in degree.items() if d == delta):
        incident = sorted(e for e in faults.edges if x in e)
        if x not in (u, v):
            if not incident:
                continue
            e = incident[0]
            case, f1 = "2.2.1", faults.with_edges(remove=[e]).with_vertices(add=[x])
            break
        swaps = [e for e in incident if (e[0] if e[1] == x else e[1]) not in (u, v)]
        if swaps:
            e = swaps[0]
            y = e[0] if e[1] == x else e[1]
            case, f1 = "2.2.2", faults.with_edges(remove=[e]).with_vertices(add=[y])
            break
    else:
        raise NoPathFound("no edge-for-vertex swap available (case 2.2)",
                          instance=_instance(g, faults, u, v, l))
    ctx.log.trace.append(case)
    view1 = SurvivorView(g, f1)
    assert not classify_pair(view1, u, v).is_weak, "swap left a weak pair"
    ctx.log.swaps.append({
        "case": case,
        "edge": [g.label(a) for a in e],
        "vertex": g.label(next(iter(f1.vertices - faults.vertices))),
        "min_degree": min_survivor_degree(view1),
    })
    return _embed(g, f1, u, v, l, ctx.log)


# -- public entry points -------------------------------------------------------


def _validate(graph: CubeGraph, faults: FaultSet, u: int, v: int, l: int, path: list):
    ok = (len(path) == l + 1 and path[0] == u and path[-1] == v and len(set(path)) == len(path)
          and not faults.vertices & set(path)
          and all(graph.has_edge(a, b) and not faults.edge_faulty(a, b) for a, b in zip(path, path[1:])))
    if not ok:
        raise NoPathFound("construction produced an invalid path",
                          instance=dict(_instance(graph, faults, u, v, l), path=path))


def embed_path(req: EmbedRequest) -> PathResult:
    g, faults, u, v, l = req.graph, req.faults, req.u, req.v, req.l
    lo, hi = length_range(g, faults, u, v)
    if not lo <= l <= hi:
        raise InvalidLength(f"length {l} outside the guaranteed range [{lo}, {hi}]")
    log = _Log()
    path = _embed(g, faults, u, v, l, log)
    _validate(g, faults, u, v, l, path)
    return log.result(path)


def embed(graph: CubeGraph, faults: FaultSet, u: int, v: int, l: int) -> PathResult:
    return embed_path(EmbedRequest(graph, faults, u, v, l))


def _oriented(graph: CubeGraph, faults: FaultSet, u: int, v: int, l: int, heavy_case: bool) -> PathResult:
    lo, hi = length_range(graph, faults, u, v)
    if not lo <= l <= hi:
        raise InvalidLength(f"length {l} outside the guaranteed range [{lo}, {hi}]")
    if graph.n == BASE_DIMENSION:
        raise DimensionTooSmall("the L/R constructions apply from n = 6; use base_case_solve")
    ctx = _Ctx(graph, faults)
    if (ctx.f_heavy == graph.n - 2) != heavy_case:
        want = "|F^L| = n-2" if heavy_case else "|F^L| <= n-3"
        raise ValueError(f"fault distribution does not satisfy {want}")
    reach = sum(ctx.hi(h, ctx.local_faults(h)) for h in (ctx.heavy, ctx.light)) + 1
    if l == (1 << graph.n) - faults.f_v - 1 and (heavy_case or l > reach):
        # the splicing constructions stop one short of Hamiltonian length here
        ctx.log.trace.append("hamiltonian")
        path = _search(graph, faults, u, v, l)
        if path is None:
            raise NoPathFound("Hamiltonian search failed for a normal pair",
                              instance=_instance(graph, faults, u, v, l))
    else:
        path = _heavy(ctx, u, v, l) if heavy_case else _balanced(ctx, u, v, l)
    _validate(graph, faults, u, v, l, path)
    return ctx.log.result(path)


def embed_balanced(graph: CubeGraph, faults: FaultSet, u: int, v: int, l: int) -> PathResult:
    """Both halves keep at most n-3 faulty elements (cases 1.1 and 1.2)."""
    return _oriented(graph, faults, u, v, l, heavy_case=False)


def embed_heavy_left(graph: CubeGraph, faults: FaultSet, u: int, v: int, l: int) -> PathResult:
    """All n-2 faulty elements sit in one half (cases 2.1.x and 2.2.x)."""
    return _oriented(graph, faults, u, v, l, heavy_case=True)


def spectrum(graph: CubeGraph, faults: FaultSet, u: int, v: int) -> dict:
    """One path for every length in ``length_range``."""
    lo, hi = length_range(graph, faults, u, v)
    out = {}
    for l in range(lo, hi + 1):
        try:
            out[l] = embed_path(EmbedRequest(graph, faults, u, v, l))
        except NoPathFound as exc:
            exc.instance.setdefault("l", l)
            raise
    return out
