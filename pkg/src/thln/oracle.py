"""Brute-force ground truth: path validation, path existence and weak-pair sweeps.

The search here shares no code with ``thln.embed``.  It works on 64-bit
vertex masks, so it handles graphs of at most 64 vertices (n <= 6).
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Optional, Sequence

import numpy as np
from numba import njit

from .errors import DimensionError, EnumerationTooLarge
from .faults import FaultSet, fault_elements, from_elements
from .graphs import CubeGraph

MAX_VERTICES = 64
DEFAULT_BUDGET = 200_000_000
DEFAULT_SEED = 20240601
EXHAUSTIVE_LIMIT = 300_000


# -- validation ---------------------------------------------------------------


def validate_path(graph: CubeGraph, faults: FaultSet, path: Sequence[int], u: int, v: int,
                  l: int) -> tuple[bool, str]:
    """Check a path and report the first violated condition."""
    path = list(path)
    if not path:
        return False, "empty path"
    if path[0] != u:
        return False, "wrong start at index 0"
    if path[-1] != v:
        return False, f"wrong end at index {len(path) - 1}"
    seen = set()
    for k, x in enumerate(path):
        if not 0 <= x < graph.num_vertices:
            return False, f"unknown vertex at index {k}"
        if x in seen:
            return False, f"repeat at index {k}"
        seen.add(x)
        if x in faults.vertices:
            return False, f"faulty vertex at index {k}"
    for k in range(len(path) - 1):
        a, b = path[k], path[k + 1]
        if not graph.has_edge(a, b):
            return False, f"non-adjacent step at index {k}"
        if faults.edge_faulty(a, b):
            return False, f"faulty edge at index {k}"
    if len(path) - 1 != l:
        return False, f"length {len(path) - 1} != {l}"
    return True, "ok"


# -- bitmask search -----------------------------------------------------------


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def _lowbit(x):
    # index of the lowest set bit
    i = 0
    while (x >> np.uint64(i)) & np.uint64(1) == 0:
        i += 1
    return i


@njit(cache=True)
def _spread(nb, mask):
    out = np.uint64(0)
    m = mask
    while m:
        i = _lowbit(m)
        out |= nb[i]
        m &= m - np.uint64(1)
    return out


@njit(cache=True)
def _room(nb, free, cur, v, r):
    """False when ``r`` more edges from ``cur`` can provably not end at ``v``."""
    bv = np.uint64(1) << np.uint64(v)
    avail = free & ~bv
    layer = nb[cur] & avail
    region = layer
    d = 1
    dv = 1 if nb[cur] & bv else -1
    while layer:
        d += 1
        nxt = _spread(nb, layer)
        if dv < 0 and nxt & bv:
            dv = d
        layer = nxt & avail & ~region
        region |= layer
    if dv < 0 or dv > r:
        return False
    if _popcount(region) < r - 1:
        return False
    # vertices with < 2 usable neighbours cannot be interior
    ends = region | bv | (np.uint64(1) << np.uint64(cur))
    inner = 0
    m = region
    while m:
        i = _lowbit(m)
        if _popcount(nb[i] & ends) >= 2:
            inner += 1
        m &= m - np.uint64(1)
    return inner >= r - 1


@njit(cache=True)
def _dfs(nb, alive, u, v, length, budget, order):
    """Returns (status, path, spent); status 1 found, 0 none, -1 budget."""
    path = np.full(length + 1, -1, dtype=np.int64)
    todo = np.zeros(length + 1, dtype=np.uint64)
    one = np.uint64(1)
    bv = one << np.uint64(v)
    path[0] = u
    free = alive & ~(one << np.uint64(u))
    spent = 0
    depth = 0
    fresh = True
    while depth >= 0:
        cur = path[depth]
        if fresh:
            fresh = False
            r = length - depth
            if r == 1:
                todo[depth] = nb[cur] & bv
            elif _room(nb, free, cur, v, r):
                todo[depth] = nb[cur] & free & ~bv
            else:
                todo[depth] = np.uint64(0)
        if todo[depth]:
            # fewest onward moves first, then by order
            best = -1
            bkey = 1 << 30
            m = todo[depth]
            while m:
                y = _lowbit(m)
                m &= m - one
                key = _popcount(nb[y] & free) * 128 + order[y]
                if key < bkey:
                    bkey = key
                    best = y
            todo[depth] &= ~(one << np.uint64(best))
            spent += 1
            if spent > budget:
                return -1, path, spent
            depth += 1
            path[depth] = best
            if depth == length:
                return 1, path, spent
            free &= ~(one << np.uint64(best))
            fresh = True
        else:
            if depth > 0:
                free |= one << np.uint64(cur)
            path[depth] = -1
            depth -= 1
    return 0, path, spent


@dataclass(frozen=True)
class Found:
    path: tuple

    status = "Found"


@dataclass(frozen=True)
class NotFound:
    status = "NotFound"


@dataclass(frozen=True)
class Skipped:
    spent: int = 0

    status = "Skipped"


def _masks(graph: CubeGraph, faults: FaultSet) -> tuple[np.ndarray, np.uint64]:
    if graph.num_vertices > MAX_VERTICES:
        raise DimensionError(f"the oracle handles at most {MAX_VERTICES} vertices")
    nb = np.zeros(graph.num_vertices, dtype=np.uint64)
    alive = 0
    for x in graph.vertices():
        if x in faults.vertices:
            continue
        alive |= 1 << x
        m = 0
        for y in graph.neighbors(x):
            if y not in faults.vertices and not faults.edge_faulty(x, y):
                m |= 1 << y
        nb[x] = m
    return nb, np.uint64(alive)


_ORDERS: dict = {}


def _order(n_vert: int, attempt: int) -> np.ndarray:
    key = (n_vert, attempt)
    if key not in _ORDERS:
        if attempt == 0:
            _ORDERS[key] = np.arange(n_vert, dtype=np.int64)[::-1].copy()
        else:
            _ORDERS[key] = random.Random(f"oracle-{attempt}").sample(range(n_vert), n_vert)
            _ORDERS[key] = np.array(_ORDERS[key], dtype=np.int64)
    return _ORDERS[key]


def exists_path_of_length(graph: CubeGraph, faults: FaultSet, u: int, v: int, l: int,
                          budget: int = DEFAULT_BUDGET):
    """Exhaustive search for a u-v path of exactly ``l`` edges.

    ``budget`` counts expanded search nodes.  Short attempts with shuffled
    tie-breaks run first; the last attempt gets whatever budget is left and
    ``NotFound`` is definitive only when it finishes within budget.
    """
    if l < 1:
        raise ValueError("length must be at least 1")
    if budget <= 0:
        return Skipped(0)
    nb, alive = _masks(graph, faults)
    if u == v or u in faults.vertices or v in faults.vertices or l >= graph.num_vertices:
        return NotFound()
    left = budget
    attempt = 0
    step = 500
    while True:
        quota = min(step, left) if step < left // 4 else left
        status, path, spent = _dfs(nb, alive, u, v, l, quota, _order(graph.num_vertices, attempt))
        left -= spent
        if status == 1:
            return Found(tuple(int(x) for x in path))
        if status == 0:
            return NotFound()
        if left <= 0:
            return Skipped(budget)
        attempt += 1
        step *= 3


# -- spectrum verification ----------------------------------------------------


@dataclass
class VerificationReport:
    instance: dict
    outcomes: dict = field(default_factory=dict)  # l -> {"status", "path"}
    disagreements: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def counts(self) -> dict:
        out = {"Found": 0, "NotFound": 0, "Skipped": 0}
        for rec in self.outcomes.values():
            out[rec["status"]] += 1
        return out

    @property
    def ok(self) -> bool:
        c = self.counts
        return not self.disagreements and c["NotFound"] == 0 and c["Skipped"] == 0

    def to_dict(self, timing: bool = True) -> dict:
        doc = {
            "instance": self.instance,
            "outcomes": {str(l): rec for l, rec in sorted(self.outcomes.items())},
            "counts": self.counts,
            "disagreements": self.disagreements,
        }
        if timing:
            doc["elapsed"] = round(self.elapsed, 6)
        return doc

    def to_json_line(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)


def verify_spectrum(graph: CubeGraph, faults: FaultSet, u: int, v: int, *,
                    cross_check: bool = True, budget: int = DEFAULT_BUDGET,
                    mutate: Optional[Callable[[list], list]] = None) -> VerificationReport:
    """Run the oracle for every length of the guaranteed range.

    With ``cross_check`` the engine's spectrum is compared length by length;
    ``mutate`` rewrites engine paths before comparison (self-test hook).
    """
    from .embed import length_range, spectrum
    from .errors import NoPathFound

    t0 = time.perf_counter()
    lo, hi = length_range(graph, faults, u, v)
    rep = VerificationReport({
        "n": graph.n,
        "variant": graph.variant.value,
        "faults": faults.to_dict(graph),
        "u": graph.label(u),
        "v": graph.label(v),
        "range": [lo, hi],
    })
    engine: dict = {}
    engine_error = None
    if cross_check:
        try:
            engine = {l: list(r.vertices) for l, r in spectrum(graph, faults, u, v).items()}
        except NoPathFound as exc:
            engine_error = str(exc)
    for l in range(lo, hi + 1):
        res = exists_path_of_length(graph, faults, u, v, l, budget)
        rec = {"status": res.status}
        if isinstance(res, Found):
            rec["path"] = [graph.label(x) for x in res.path]
        rep.outcomes[l] = rec
        if not cross_check:
            continue
        if l not in engine:
            rep.disagreements.append({"l": l, "oracle": res.status,
                                      "engine": engine_error or "missing"})
            continue
        path = mutate(list(engine[l])) if mutate else engine[l]
        ok, why = validate_path(graph, faults, path, u, v, l)
        if not ok or isinstance(res, NotFound):
            rep.disagreements.append({"l": l, "oracle": res.status,
                                      "engine": "valid" if ok else f"invalid: {why}"})
    rep.elapsed = time.perf_counter() - t0
    return rep


# -- weak-pair sweeps ---------------------------------------------------------


def _weak_hits(graph: CubeGraph, faults: FaultSet) -> list:
    """Faultless vertices with exactly two survivor neighbours."""
    n = graph.n
    bad = faults.vertices
    touched = set(bad)
    for a, b in faults.edges:
        touched.update((a, b))
    cands = set()
    for x in touched:
        cands.update(graph.neighbors(x))
        cands.add(x)
    out = []
    for w in sorted(cands - bad):
        nbrs = [y for y in graph.neighbors(w) if y not in bad and not faults.edge_faulty(w, y)]
        if len(nbrs) == 2:
            out.append((w, (nbrs[0], nbrs[1])))
    return out


def exhaustive_weak_pairs(graph: CubeGraph, k: int, *, exhaustive: Optional[bool] = None,
                          samples: int = 2000, seed: int = DEFAULT_SEED) -> list:
    """Every weak 2-degree vertex over fault sets of size ``k``.

    Exhaustive for n <= 4 by default, seeded sampling above that.  Returns
    ``(FaultSet, w, (w1, w2))`` triples in enumeration order.
    """
    if k < 0 or k > max(graph.n - 2, 0):
        raise ValueError(f"k must lie in [0, n-2], got {k}")
    if k == 0:
        return []
    elements = fault_elements(graph)
    if exhaustive is None:
        exhaustive = graph.n <= 4
    if exhaustive:
        total = comb(len(elements), k)
        if total > EXHAUSTIVE_LIMIT:
            raise EnumerationTooLarge(f"{total} fault sets exceeds the limit of {EXHAUSTIVE_LIMIT}")
        sets = (from_elements(c) for c in itertools.combinations(elements, k))
    else:
        rng = random.Random(seed)
        sets = (from_elements(rng.sample(elements, k)) for _ in range(samples))
    hits = []
    for fs in sets:
        for w, pair in _weak_hits(graph, fs):
            hits.append((fs, w, pair))
    return hits


def sweep_size(graph: CubeGraph, k: int) -> int:
    return comb(graph.num_vertices + graph.num_edges, k)
