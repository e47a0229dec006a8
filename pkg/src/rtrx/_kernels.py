"""Numba kernels shared by the graph, triangle, and extraction layers.

Everything here operates on flat arrays owned by Graph or WorkingSubgraph.
Threshold tests use exact integer arithmetic: an edge is bad when

    tri * eps_den < eps_num * (deg_u + deg_v)

which avoids float boundary artifacts (0.1 * 30 is not exactly 3.0 in
binary floating point, and the cleaning rule is a strict inequality).

WorkingSubgraph state vector (int64[5]):
  [0] live edge count
  [1] live vertex count
  [2] bad queue tail (next write slot)
  [3] bad queue head (next read slot)
  [4] seed cursor into the degree-ordered vertex array

The bad queue is append-only with capacity m: in_queue flags are never
cleared and a queued edge can only be deleted, so each edge is enqueued
at most once over an entire run.
"""

import numpy as np
from numba import njit, prange

S_LIVE_EDGES = 0
S_LIVE_VERTS = 1
S_QTAIL = 2
S_QHEAD = 3
S_CURSOR = 4
STATE_LEN = 5


@njit(cache=True)
def _tri_count_serial(out_indptr, out_dst, out_eid, tri):
    # Forward counting over the degree-ordered orientation: every triangle
    # has exactly one vertex with out-edges to the other two.
    n = out_indptr.shape[0] - 1
    for u in range(n):
        us = out_indptr[u]
        ue = out_indptr[u + 1]
        for k in range(us, ue):
            v = out_dst[k]
            euv = out_eid[k]
            i = us
            j = out_indptr[v]
            jend = out_indptr[v + 1]
            while i < ue and j < jend:
                a = out_dst[i]
                b = out_dst[j]
                if a < b:
                    i += 1
                elif b < a:
                    j += 1
                else:
                    tri[euv] += 1
                    tri[out_eid[i]] += 1
                    tri[out_eid[j]] += 1
                    i += 1
                    j += 1


@njit(cache=True, parallel=True)
def _tri_count_chunked(out_indptr, out_dst, out_eid, vstart, buf):
    # Per-chunk buffers summed by the caller in fixed order keep the
    # parallel path bit-identical to the serial one.
    nch = vstart.shape[0] - 1
    for c in prange(nch):
        for u in range(vstart[c], vstart[c + 1]):
            us = out_indptr[u]
            ue = out_indptr[u + 1]
            for k in range(us, ue):
                v = out_dst[k]
                euv = out_eid[k]
                i = us
                j = out_indptr[v]
                jend = out_indptr[v + 1]
                while i < ue and j < jend:
                    a = out_dst[i]
                    b = out_dst[j]
                    if a < b:
                        i += 1
                    elif b < a:
                        j += 1
                    else:
                        buf[c, euv] += 1
                        buf[c, out_eid[i]] += 1
                        buf[c, out_eid[j]] += 1
                        i += 1
                        j += 1


@njit(cache=True)
def _seed_bad_queue(alive, tri, edges_u, edges_v, deg, eps_num, eps_den,
                    queue, in_queue, state):
    m = alive.shape[0]
    for e in range(m):
        if alive[e] == 1 and in_queue[e] == 0:
            if tri[e] * eps_den < eps_num * (deg[edges_u[e]] + deg[edges_v[e]]):
                in_queue[e] = 1
                queue[state[S_QTAIL]] = e
                state[S_QTAIL] += 1


@njit(cache=True)
def _delete_edge(e, indptr, indices, edge_ids, alive, tri, live_deg,
                 edges_u, edges_v, deg, eps_num, eps_den,
                 queue, in_queue, state):
    # Caller guarantees alive[e] == 1. Destroying edge (u, v) kills every
    # triangle (u, v, w) with w a currently-live common neighbor; the two
    # companion edges of each lose one triangle and are queued if that
    # pushes them under the threshold.
    u = edges_u[e]
    v = edges_v[e]
    alive[e] = 0
    tri[e] = 0
    live_deg[u] -= 1
    if live_deg[u] == 0:
        state[S_LIVE_VERTS] -= 1
    live_deg[v] -= 1
    if live_deg[v] == 0:
        state[S_LIVE_VERTS] -= 1
    state[S_LIVE_EDGES] -= 1

    i = indptr[u]
    iend = indptr[u + 1]
    j = indptr[v]
    jend = indptr[v + 1]
    while i < iend and j < jend:
        a = indices[i]
        b = indices[j]
        if a < b:
            i += 1
        elif b < a:
            j += 1
        else:
            e1 = edge_ids[i]
            e2 = edge_ids[j]
            if alive[e1] == 1 and alive[e2] == 1:
                tri[e1] -= 1
                tri[e2] -= 1
                if in_queue[e1] == 0 and tri[e1] * eps_den < eps_num * (deg[edges_u[e1]] + deg[edges_v[e1]]):
                    in_queue[e1] = 1
                    queue[state[S_QTAIL]] = e1
                    state[S_QTAIL] += 1
                if in_queue[e2] == 0 and tri[e2] * eps_den < eps_num * (deg[edges_u[e2]] + deg[edges_v[e2]]):
                    in_queue[e2] = 1
                    queue[state[S_QTAIL]] = e2
                    state[S_QTAIL] += 1
            i += 1
            j += 1


@njit(cache=True)
def _drain_bad_queue(indptr, indices, edge_ids, alive, tri, live_deg,
                     edges_u, edges_v, deg, eps_num, eps_den,
                     queue, in_queue, state):
    deleted = 0
    while state[S_QHEAD] < state[S_QTAIL]:
        e = queue[state[S_QHEAD]]
        state[S_QHEAD] += 1
        if alive[e] == 1:
            _delete_edge(e, indptr, indices, edge_ids, alive, tri, live_deg,
                         edges_u, edges_v, deg, eps_num, eps_den,
                         queue, in_queue, state)
            deleted += 1
    return deleted


@njit(cache=True)
def _remove_vertices(verts, indptr, indices, edge_ids, alive, tri, live_deg,
                     edges_u, edges_v, deg, eps_num, eps_den,
                     queue, in_queue, state):
    # Deleting an extracted set cascades triangle updates into the rest of
    # H exactly like cleaning deletions; newly bad outside edges queue up
    # for the next clean pass.
    for idx in range(verts.shape[0]):
        u = verts[idx]
        for pos in range(indptr[u], indptr[u + 1]):
            e = edge_ids[pos]
            if alive[e] == 1:
                _delete_edge(e, indptr, indices, edge_ids, alive, tri, live_deg,
                             edges_u, edges_v, deg, eps_num, eps_den,
                             queue, in_queue, state)


@njit(cache=True)
def _advance_cursor(order, live_deg, state):
    # live_deg never increases, so the skip is monotone and amortized O(n)
    # over a whole run.
    n = order.shape[0]
    c = state[S_CURSOR]
    while c < n and live_deg[order[c]] == 0:
        c += 1
    state[S_CURSOR] = c
    if c < n:
        return order[c]
    return -1


@njit(cache=True)
def _two_hop_scan(v, nbrs, indptr, indices, edge_ids, alive,
                  mark, bcnt, tcnt, touched):
    """Scan around the seed neighborhood.

    Marks {v} (2) and N (1), counts live and total edges inside {v} u N,
    finds every live vertex outside with at least one live edge into N,
    and tallies t_u, the number of live triangles u forms with two members
    of N. Scratch arrays must arrive zeroed; bcnt/tcnt entries for
    returned candidates are the caller's to reset via `touched`.

    Returns (candidate count, live edges inside, total edges inside).
    """
    mark[v] = 2
    for idx in range(nbrs.shape[0]):
        mark[nbrs[idx]] = 1

    twice_live = 0
    twice_any = 0
    ncand = 0
    for sel in range(nbrs.shape[0] + 1):
        a = v if sel == nbrs.shape[0] else nbrs[sel]
        for pos in range(indptr[a], indptr[a + 1]):
            w = indices[pos]
            live = alive[edge_ids[pos]] == 1
            if mark[w] >= 1:
                twice_any += 1
                if live:
                    twice_live += 1
            elif live:
                if bcnt[w] == 0:
                    touched[ncand] = w
                    ncand += 1
                bcnt[w] += 1

    # Triangles from outside vertices into N: enumerate live edges (a, b)
    # with both ends in N, then intersect live adjacency.
    for ii in range(nbrs.shape[0]):
        a = nbrs[ii]
        for pos in range(indptr[a], indptr[a + 1]):
            b = indices[pos]
            if b <= a or mark[b] != 1 or alive[edge_ids[pos]] != 1:
                continue
            i = indptr[a]
            iend = indptr[a + 1]
            j = indptr[b]
            jend = indptr[b + 1]
            while i < iend and j < jend:
                x = indices[i]
                y = indices[j]
                if x < y:
                    i += 1
                elif y < x:
                    j += 1
                else:
                    if mark[x] == 0 and alive[edge_ids[i]] == 1 and alive[edge_ids[j]] == 1:
                        tcnt[x] += 1
                    i += 1
                    j += 1
    return ncand, twice_live // 2, twice_any // 2


@njit(cache=True)
def _sweep_gains(cands, indptr, indices, edge_ids, alive, use_alive, mark, gains):
    # Candidates join the marked set one by one, so gains[i] counts edges
    # from cands[i] into {v} u N u cands[:i].
    for i in range(cands.shape[0]):
        c = cands[i]
        cnt = 0
        for pos in range(indptr[c], indptr[c + 1]):
            w = indices[pos]
            if mark[w] >= 1 and (use_alive == 0 or alive[edge_ids[pos]] == 1):
                cnt += 1
        gains[i] = cnt
        mark[c] = 1


@njit(cache=True)
def _clear_marks(verts, mark):
    for i in range(verts.shape[0]):
        mark[verts[i]] = 0


@njit(cache=True)
def _common_live_neighbors(u, v, indptr, indices, edge_ids, alive, out):
    k = 0
    i = indptr[u]
    iend = indptr[u + 1]
    j = indptr[v]
    jend = indptr[v + 1]
    while i < iend and j < jend:
        a = indices[i]
        b = indices[j]
        if a < b:
            i += 1
        elif b < a:
            j += 1
        else:
            if alive[edge_ids[i]] == 1 and alive[edge_ids[j]] == 1:
                out[k] = a
                k += 1
            i += 1
            j += 1
    return k


@njit(cache=True)
def _verify_edges(sample, indptr, indices, edge_ids, alive, tri,
                  edges_u, edges_v, deg, eps_num, eps_den):
    # Recompute triangle counts from scratch for the sampled live edges and
    # check both the maintained count and the fixpoint condition.
    bad = 0
    for s in range(sample.shape[0]):
        e = sample[s]
        if alive[e] != 1:
            continue
        u = edges_u[e]
        v = edges_v[e]
        k = 0
        i = indptr[u]
        iend = indptr[u + 1]
        j = indptr[v]
        jend = indptr[v + 1]
        while i < iend and j < jend:
            a = indices[i]
            b = indices[j]
            if a < b:
                i += 1
            elif b < a:
                j += 1
            else:
                if alive[edge_ids[i]] == 1 and alive[edge_ids[j]] == 1:
                    k += 1
                i += 1
                j += 1
        if k != tri[e]:
            bad += 1
        elif k * eps_den < eps_num * (deg[u] + deg[v]):
            bad += 1
    return bad


@njit(cache=True)
def _induced_edge_count(s, mark, indptr, indices):
    for i in range(s.shape[0]):
        mark[s[i]] = 1
    twice = 0
    for i in range(s.shape[0]):
        u = s[i]
        for pos in range(indptr[u], indptr[u + 1]):
            if mark[indices[pos]] == 1:
                twice += 1
    for i in range(s.shape[0]):
        mark[s[i]] = 0
    return twice // 2


@njit(cache=True)
def _induced_triangle_count(s, mark, indptr, indices):
    for i in range(s.shape[0]):
        mark[s[i]] = 1
    total = 0
    for i in range(s.shape[0]):
        u = s[i]
        for pos in range(indptr[u], indptr[u + 1]):
            v = indices[pos]
            if v <= u or mark[v] != 1:
                continue
            a = indptr[u]
            aend = indptr[u + 1]
            b = indptr[v]
            bend = indptr[v + 1]
            while a < aend and b < bend:
                x = indices[a]
                y = indices[b]
                if x < y:
                    a += 1
                elif y < x:
                    b += 1
                else:
                    if x > v and mark[x] == 1:
                        total += 1
                    a += 1
                    b += 1
    for i in range(s.shape[0]):
        mark[s[i]] = 0
    return total


@njit(cache=True)
def _grow_pass(unassigned, indptr, indices, frozen, out_assign, k, cnt, touched):
    """One frozen-membership growing pass; returns the number of moves.

    Set membership is read from `frozen` and writes go to `out_assign`,
    so the result does not depend on the processing order.
    """
    moved = 0
    for idx in range(unassigned.shape[0]):
        v = unassigned[idx]
        nt = 0
        for pos in range(indptr[v], indptr[v + 1]):
            t = frozen[indices[pos]]
            if t >= 0:
                if cnt[t] == 0:
                    touched[nt] = t
                    nt += 1
                cnt[t] += 1
        best = -1
        bestc = 0
        for i in range(nt):
            t = touched[i]
            c = cnt[t]
            if c > bestc:
                bestc = c
                best = t
            elif c == bestc and t < best:
                best = t
        for i in range(nt):
            cnt[touched[i]] = 0
        if best >= 0 and bestc >= k:
            out_assign[v] = best
            moved += 1
    return moved


def make_state():
    return np.zeros(STATE_LEN, dtype=np.int64)


def chunk_starts(out_indptr, nchunks):
    """Split vertices into nchunks contiguous ranges with roughly equal
    oriented-edge work."""
    n = out_indptr.shape[0] - 1
    total = int(out_indptr[-1])
    targets = np.linspace(0, total, nchunks + 1)
    vs = np.searchsorted(out_indptr, targets, side="left").astype(np.int64)
    vs[0] = 0
    vs[-1] = n
    return np.maximum.accumulate(vs)
