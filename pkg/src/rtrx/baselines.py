"""Comparison baselines: greedy density peeling and k-core decomposition.

Both are evaluation-scale reference methods, kept in plain Python over
the shared Graph arrays. Heavier community methods are consumed through
the compare command as external set files instead of being reimplemented.
"""

from __future__ import annotations

import heapq

import numpy as np

from .extractor import SetFamily
from .graph import Graph

__all__ = ["greedy_peel", "iterated_greedy", "core_decomposition", "core_groups"]


def _peel_trace(g: Graph, active: np.ndarray):
    """Peel minimum-current-degree vertices (ties to lowest id) off the
    subgraph induced by `active`, tracking 2E/V after each removal.

    Returns (best set as sorted array, best E, best V), where best is the
    prefix state maximizing the density ratio, earliest prefix on ties.
    """
    n = g.n
    both = active[g.edges_u] & active[g.edges_v]
    cur = (np.bincount(g.edges_u[both], minlength=n)
           + np.bincount(g.edges_v[both], minlength=n)).astype(np.int64)
    e_cur = int(np.count_nonzero(both))
    verts = np.flatnonzero(active)
    v_cur = int(verts.size)

    heap = [(int(cur[v]), int(v)) for v in verts]
    heapq.heapify(heap)
    removed = np.zeros(n, dtype=bool)
    removal_order = []
    es = [e_cur]
    vs = [v_cur]
    adj = g.indices
    indptr = g.indptr
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != cur[v]:
            continue
        removed[v] = True
        for w in adj[indptr[v]:indptr[v + 1]].tolist():
            if active[w] and not removed[w]:
                e_cur -= 1
                cur[w] -= 1
                heapq.heappush(heap, (int(cur[w]), w))
        v_cur -= 1
        removal_order.append(v)
        es.append(e_cur)
        vs.append(v_cur)

    # argmax of 2*es[i]/vs[i] over i = 0..V-1 by exact cross multiplication;
    # strict > keeps the earliest (largest) prefix on ties
    best_i = 0
    for i in range(1, len(es) - 1):
        if es[i] * vs[best_i] > es[best_i] * vs[i]:
            best_i = i
    cut = set(removal_order[:best_i])
    best = np.array([v for v in verts.tolist() if v not in cut], dtype=np.int32)
    return best, es[best_i], vs[best_i]


def greedy_peel(g: Graph) -> np.ndarray:
    """Charikar-style peeling for the ratio D = 2E/V.

    Removes a minimum-current-degree vertex at a time and returns the
    remaining-set prefix with the highest D seen (the full graph counts as
    a prefix). Guaranteed within factor 2 of the best subset.
    """
    if g.m == 0:
        raise ValueError("no edges")
    active = np.ones(g.n, dtype=bool)
    best, _, _ = _peel_trace(g, active)
    return best


def iterated_greedy(g: Graph, max_sets: int = None) -> SetFamily:
    """Repeat greedy_peel on what is left until the remainder is edgeless
    (or max_sets is reached); leftovers are unassigned."""
    if max_sets is not None and int(max_sets) < 1:
        raise ValueError("max_sets must be at least 1")
    active = np.ones(g.n, dtype=bool)
    sets = []
    while max_sets is None or len(sets) < max_sets:
        both = active[g.edges_u] & active[g.edges_v]
        if not both.any():
            break
        best, be, _ = _peel_trace(g, active)
        if be == 0:
            break
        sets.append(best)
        active[best] = False
    return SetFamily(g.n, sets)


def core_decomposition(g: Graph) -> np.ndarray:
    """Core number per vertex by bucket peeling: the largest k such that
    the vertex survives repeated deletion of degree < k vertices."""
    n = g.n
    deg = np.array(g.degrees, dtype=np.int64, copy=True)
    if n == 0:
        return deg
    vert = np.argsort(deg, kind="stable").astype(np.int64)
    pos = np.empty(n, dtype=np.int64)
    pos[vert] = np.arange(n)
    md = int(deg.max())
    counts = np.bincount(deg, minlength=md + 1)
    bin_start = np.zeros(md + 2, dtype=np.int64)
    np.cumsum(counts, out=bin_start[1:md + 2])

    indptr = g.indptr
    indices = g.indices
    for i in range(n):
        v = int(vert[i])
        dv = deg[v]
        for w in indices[indptr[v]:indptr[v + 1]].tolist():
            dw = deg[w]
            if dw > dv:
                # swap w to the front of its bucket, then shrink the bucket
                pw = pos[w]
                ps = bin_start[dw]
                u = int(vert[ps])
                if u != w:
                    vert[pw] = u
                    vert[ps] = w
                    pos[w] = ps
                    pos[u] = pw
                bin_start[dw] += 1
                deg[w] = dw - 1
    return deg


class _UnionFind:
    def __init__(self, n):
        self.parent = np.arange(n, dtype=np.int64)

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def core_groups(g: Graph, cores: np.ndarray = None) -> SetFamily:
    """Partition vertices into maximal-k connected core components: v goes
    with the connected component of the k_v-core that contains it, where
    k_v is v's core number. Ordered by core level descending, then by
    smallest member id. Useful as a family for coverage evaluation."""
    if cores is None:
        cores = core_decomposition(g)
    n = g.n
    uf = _UnionFind(n)
    edge_level = np.minimum(cores[g.edges_u], cores[g.edges_v])
    maxk = int(cores.max()) if n else 0

    edges_by_level = [[] for _ in range(maxk + 1)]
    for e in range(g.m):
        edges_by_level[int(edge_level[e])].append(e)
    verts_by_level = [[] for _ in range(maxk + 1)]
    for v in range(n):
        verts_by_level[int(cores[v])].append(v)

    groups = {}
    for k in range(maxk, 0, -1):
        # isolated (core-0) vertices stay unassigned
        for e in edges_by_level[k]:
            uf.union(int(g.edges_u[e]), int(g.edges_v[e]))
        for v in verts_by_level[k]:
            groups.setdefault((k, uf.find(v)), []).append(v)

    keys = sorted(groups, key=lambda kr: (-kr[0], min(groups[kr])))
    sets = [np.array(sorted(groups[kr]), dtype=np.int32) for kr in keys]
    return SetFamily(n, sets)
