"""Exhaustive path search with backtracking and branch-and-bound pruning.

Used by the engine for the base dimension and for Hamiltonian paths.  The
kernel is compiled with numba; the graph arrives as a neighbour table in
which faulty edges and edges to faulty vertices are already set to -1.

Pruning at every node, with ``r`` edges still to place from the current
endpoint ``cur``:

* flood fill from ``cur`` through unvisited live vertices, never passing
  through ``v``; ``v`` must be touched within ``r`` steps;
* the fill must contain at least ``r - 1`` vertices that can still be
  interior to the path (two usable neighbours), otherwise the remaining
  length cannot be spent;
* ``v`` is only ever entered as the last step.
"""

from __future__ import annotations

import numpy as np
from numba import njit

FOUND = 1
NOT_FOUND = 0
BUDGET_EXHAUSTED = -1


@njit(cache=True)
def _feasible(table, alive, visited, cur, v, r, queue, dist, stamp, tick, work):
    # Flood fill from cur avoiding v; returns False when r edges cannot fit.
    n_vert = table.shape[0]
    width = table.shape[1]
    head = 0
    tail = 0
    dist_v = -1
    for j in range(width):
        y = table[cur, j]
        if y < 0 or visited[y]:
            continue
        if y == v:
            dist_v = 1
            continue
        if stamp[y] != tick:
            stamp[y] = tick
            dist[y] = 1
            queue[tail] = y
            tail += 1
    while head < tail:
        x = queue[head]
        head += 1
        for j in range(width):
            y = table[x, j]
            if y < 0 or visited[y]:
                continue
            if y == v:
                if dist_v < 0:
                    dist_v = dist[x] + 1
                continue
            if stamp[y] != tick:
                stamp[y] = tick
                dist[y] = dist[x] + 1
                queue[tail] = y
                tail += 1
    if dist_v < 0 or dist_v > r:
        return False
    if tail < r - 1:
        return False
    # Vertices with fewer than two usable neighbours cannot be interior.
    usable = 0
    for i in range(tail):
        x = queue[i]
        cnt = 0
        for j in range(width):
            y = table[x, j]
            if y < 0:
                continue
            if y == cur or y == v or (not visited[y] and stamp[y] == tick):
                cnt += 1
        if cnt >= 2:
            usable += 1
    if usable < r - 1:
        return False
    return _cut_bound_ok(table, visited, cur, v, stamp, tick, tail - (r - 1), work)


@njit(cache=True)
def _cut_bound_ok(table, visited, cur, v, stamp, tick, slack, w):
    # Tarjan DFS over the flood-filled region plus cur (v excluded).  For a
    # cut vertex a, the path can enter at most one block separated by a, and
    # that block must touch v; the rest must be skipped within the slack.
    n_vert = table.shape[0]
    width = table.shape[1]
    disc, low, size, hasv, par, sepsum, sepmax, stack, it, dst = w
    dtick = tick
    t = 0
    dst[cur] = dtick
    disc[cur] = 0
    low[cur] = 0
    size[cur] = 1
    hasv[cur] = 0
    sepsum[cur] = 0
    sepmax[cur] = 0
    par[cur] = -1
    stack[0] = cur
    it[0] = 0
    sp = 1
    t = 1
    while sp > 0:
        x = stack[sp - 1]
        if it[sp - 1] < width:
            y = table[x, it[sp - 1]]
            it[sp - 1] += 1
            if y < 0:
                continue
            if y == v:
                hasv[x] = 1
                continue
            if y != cur and (visited[y] or stamp[y] != tick):
                continue
            if dst[y] != dtick:
                dst[y] = dtick
                disc[y] = t
                low[y] = t
                t += 1
                size[y] = 1
                hasv[y] = 0
                sepsum[y] = 0
                sepmax[y] = 0
                par[y] = x
                stack[sp] = y
                it[sp] = 0
                sp += 1
            elif y != par[x]:
                if disc[y] < low[x]:
                    low[x] = disc[y]
        else:
            sp -= 1
            if sp > 0:
                p = stack[sp - 1]
                if low[x] < low[p]:
                    low[p] = low[x]
                size[p] += size[x]
                if hasv[x]:
                    hasv[p] = 1
                if low[x] >= disc[p]:
                    sepsum[p] += size[x]
                    if hasv[x] and size[x] > sepmax[p]:
                        sepmax[p] = size[x]
            # x is finished: all its separated blocks are known
            if sepsum[x] - sepmax[x] > slack:
                return False
    return True


@njit(cache=True)
def _onward(table, visited, y):
    cnt = 0
    for j in range(table.shape[1]):
        z = table[y, j]
        if z >= 0 and not visited[z]:
            cnt += 1
    return cnt


@njit(cache=True)
def search_path(table, alive, u, v, length, budget, rank):
    """Find a simple u-v path with exactly ``length`` edges.

    Returns ``(status, path, expanded)``; ``budget < 0`` means unlimited.
    Neighbours are tried in order of fewest onward moves, ties broken by
    ``rank[y]`` (a permutation of the vertices).
    """
    n_vert = table.shape[0]
    width = table.shape[1]
    path = np.full(length + 1, -1, dtype=np.int64)
    if u == v or length < 1 or not alive[u] or not alive[v]:
        return NOT_FOUND, path, 0
    if length > n_vert - 1:
        return NOT_FOUND, path, 0
    visited = np.zeros(n_vert, dtype=np.bool_)
    cand = np.empty((length + 1, width), dtype=np.int64)
    ncand = np.zeros(length + 1, dtype=np.int64)
    pos = np.zeros(length + 1, dtype=np.int64)
    keys = np.empty(width, dtype=np.int64)
    queue = np.empty(n_vert, dtype=np.int64)
    dist = np.zeros(n_vert, dtype=np.int64)
    stamp = np.zeros(n_vert, dtype=np.int64)
    tick = 0
    expanded = 0
    work = (np.zeros(n_vert, dtype=np.int64), np.zeros(n_vert, dtype=np.int64),
            np.zeros(n_vert, dtype=np.int64), np.zeros(n_vert, dtype=np.int64),
            np.zeros(n_vert, dtype=np.int64), np.zeros(n_vert, dtype=np.int64),
            np.zeros(n_vert, dtype=np.int64), np.zeros(n_vert, dtype=np.int64),
            np.zeros(n_vert, dtype=np.int64), np.zeros(n_vert, dtype=np.int64))

    path[0] = u
    visited[u] = True
    depth = 0
    need_expand = True
    while depth >= 0:
        if need_expand:
            need_expand = False
            cur = path[depth]
            r = length - depth
            k = 0
            if r == 1:
                for j in range(width):
                    if table[cur, j] == v:
                        cand[depth, 0] = v
                        k = 1
                        break
            else:
                tick += 1
                if _feasible(table, alive, visited, cur, v, r, queue, dist, stamp, tick, work):
                    for j in range(width):
                        y = table[cur, j]
                        if y < 0 or visited[y] or y == v:
                            continue
                        key = _onward(table, visited, y) * n_vert + rank[y]
                        # insertion sort by (onward degree, label)
                        i = k
                        while i > 0 and keys[i - 1] > key:
                            keys[i] = keys[i - 1]
                            cand[depth, i] = cand[depth, i - 1]
                            i -= 1
                        keys[i] = key
                        cand[depth, i] = y
                        k += 1
            ncand[depth] = k
            pos[depth] = 0
        if pos[depth] < ncand[depth]:
            y = cand[depth, pos[depth]]
            pos[depth] += 1
            expanded += 1
            if budget >= 0 and expanded > budget:
                return BUDGET_EXHAUSTED, path, expanded
            depth += 1
            path[depth] = y
            if depth == length:
                return FOUND, path, expanded
            visited[y] = True
            need_expand = True
        else:
            visited[path[depth]] = False
            path[depth] = -1
            depth -= 1
    return NOT_FOUND, path, expanded


RESTART_BASE = 200
RESTARTS = 10
_RANKS: dict = {}


def _rank(n_vert: int, attempt: int) -> np.ndarray:
    key = (n_vert, attempt)
    if key not in _RANKS:
        if attempt == 0:
            _RANKS[key] = np.arange(n_vert, dtype=np.int64)
        else:
            _RANKS[key] = np.random.default_rng(attempt).permutation(n_vert).astype(np.int64)
    return _RANKS[key]


def find_path(table: np.ndarray, alive: np.ndarray, u: int, v: int, length: int):
    """Deterministic restart search; returns a vertex list or None.

    Short budgeted attempts with different tie-break orders come first,
    then a final unbounded run, so ``None`` means no such path exists.
    """
    n_vert = table.shape[0]
    for attempt in range(RESTARTS):
        status, path, _ = search_path(table, alive, u, v, length, RESTART_BASE << attempt,
                                      _rank(n_vert, attempt))
        if status == FOUND:
            return path.tolist()
        if status == NOT_FOUND:
            return None
    status, path, _ = search_path(table, alive, u, v, length, -1, _rank(n_vert, 0))
    return path.tolist() if status == FOUND else None
