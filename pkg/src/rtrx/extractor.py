"""Iterated clean-and-extract over a mutable working subgraph.

The working subgraph H starts as the whole input graph. Cleaning deletes
every edge lying in fewer than eps * (d_u + d_v) triangles of H, where
d_u and d_v are ORIGINAL input-graph degrees, and cascades until no such
edge remains. Extraction then seeds at a live vertex of minimum original
degree, takes its live neighborhood N, augments with two-hop vertices
(greedy density sweep by default, or a beta threshold on triangle counts),
and removes the whole set from H. The loop alternates until H is empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from ._kernels import (S_CURSOR, S_LIVE_EDGES, S_LIVE_VERTS, S_QHEAD,
                       S_QTAIL, make_state)
from .graph import Graph
from .triangles import count_edge_triangle_array

__all__ = [
    "ExtractionParams",
    "WorkingSubgraph",
    "SetFamily",
    "clean",
    "extract_one",
    "two_hop_select",
    "run",
]

# Denominator cap keeps tri * eps_den inside int64 in the kernels.
_EPS_DEN_CAP = 10**9
_VERIFY_SAMPLE = 512

GREEDY_SWEEP = "greedy_sweep"
BETA_THRESHOLD = "beta_threshold"


def _fraction_parts(x, cap=None):
    """Exact (numerator, denominator) for a threshold parameter.

    Floats go through repr so a user's 0.1 means one tenth, not the
    nearest binary double.
    """
    if isinstance(x, Fraction):
        fr = x
    elif isinstance(x, float):
        fr = Fraction(repr(x))
    elif isinstance(x, (int, np.integer)):
        fr = Fraction(int(x))
    elif isinstance(x, str):
        fr = Fraction(x)
    else:
        raise TypeError(f"cannot interpret {x!r} as a fraction")
    if cap is not None and fr.denominator > cap:
        fr = fr.limit_denominator(cap)
    return fr.numerator, fr.denominator


@dataclass(frozen=True)
class ExtractionParams:
    """Tunables for one extraction run.

    epsilon: cleaning fraction, 0 < epsilon < 1.
    grow_k: neighbor threshold for the post-extraction growing pass.
    two_hop_mode: "greedy_sweep" or "beta_threshold".
    beta: threshold fraction, only read in beta_threshold mode.
    sweep_density: "h" evaluates sweep densities over live edges of H,
        "g" over all input-graph edges.
    """

    epsilon: float = 0.1
    grow_k: int = 10
    two_hop_mode: str = GREEDY_SWEEP
    beta: float = 0.0
    sweep_density: str = "h"

    def __post_init__(self):
        num, den = _fraction_parts(self.epsilon, _EPS_DEN_CAP)
        if not 0 < num < den:
            raise ValueError("epsilon must lie strictly between 0 and 1")
        bn, _ = _fraction_parts(self.beta)
        if bn < 0:
            raise ValueError("beta must be nonnegative")
        if int(self.grow_k) < 0:
            raise ValueError("grow_k must be nonnegative")
        if self.two_hop_mode not in (GREEDY_SWEEP, BETA_THRESHOLD):
            raise ValueError(f"unknown two_hop_mode {self.two_hop_mode!r}")
        if self.sweep_density not in ("h", "g"):
            raise ValueError("sweep_density must be 'h' or 'g'")

    @property
    def epsilon_parts(self):
        return _fraction_parts(self.epsilon, _EPS_DEN_CAP)

    @property
    def beta_parts(self):
        return _fraction_parts(self.beta)


class WorkingSubgraph:
    """Mutable live-edge view over a Graph with maintained triangle counts.

    Invariants: every live edge's stored count equals its true triangle
    count in H; the bad queue holds exactly the live edges violating the
    bound threshold; the seed cursor never passes a live vertex.
    Single-writer; use one instance per run.
    """

    def __init__(self, g: Graph, counts: np.ndarray = None, threads: int = 1):
        self.graph = g
        if counts is None:
            counts = count_edge_triangle_array(g, threads=threads)
        self.tri = np.array(counts, dtype=np.int64, copy=True)
        if self.tri.shape[0] != g.m:
            raise ValueError("counts must have one entry per edge")
        self.alive = np.ones(g.m, dtype=np.uint8)
        self.live_deg = np.array(g.degrees, dtype=np.int64, copy=True)
        self.order = np.lexsort((np.arange(g.n), g.degrees))
        self.queue = np.empty(g.m, dtype=np.int32)
        self.in_queue = np.zeros(g.m, dtype=np.uint8)
        self.state = make_state()
        self.state[S_LIVE_EDGES] = g.m
        self.state[S_LIVE_VERTS] = int(np.count_nonzero(g.degrees))
        self._eps = None
        self._mark = np.zeros(g.n, dtype=np.int8)
        self._bcnt = np.zeros(g.n, dtype=np.int64)
        self._tcnt = np.zeros(g.n, dtype=np.int64)
        self._touched = np.empty(g.n, dtype=np.int32)

    @property
    def live_edge_count(self) -> int:
        return int(self.state[S_LIVE_EDGES])

    @property
    def live_vertex_count(self) -> int:
        return int(self.state[S_LIVE_VERTS])

    def live_neighbors(self, v: int) -> np.ndarray:
        g = self.graph
        s, e = g.indptr[v], g.indptr[v + 1]
        return g.indices[s:e][self.alive[g.edge_ids[s:e]] == 1]

    def live_edges(self) -> np.ndarray:
        """(k, 2) array of live edges, canonical order. For inspection."""
        ids = np.flatnonzero(self.alive)
        return np.stack([self.graph.edges_u[ids], self.graph.edges_v[ids]], axis=1)

    def seed_vertex(self) -> int:
        """Live vertex of minimum original degree, ties to lowest id;
        -1 when H is empty."""
        return int(_kernels._advance_cursor(self.order, self.live_deg, self.state))

    def clean(self, epsilon) -> int:
        num, den = _fraction_parts(epsilon, _EPS_DEN_CAP)
        if not 0 < num < den:
            raise ValueError("epsilon must lie strictly between 0 and 1")
        g = self.graph
        if self._eps != (num, den):
            # (Re)bind the threshold: restart the queue from a full scan.
            self._eps = (num, den)
            self.state[S_QTAIL] = 0
            self.state[S_QHEAD] = 0
            self.in_queue[:] = 0
            _kernels._seed_bad_queue(self.alive, self.tri, g.edges_u, g.edges_v,
                                     g.degrees, num, den, self.queue,
                                     self.in_queue, self.state)
        return int(_kernels._drain_bad_queue(
            g.indptr, g.indices, g.edge_ids, self.alive, self.tri,
            self.live_deg, g.edges_u, g.edges_v, g.degrees, num, den,
            self.queue, self.in_queue, self.state))

    def remove_set(self, verts: np.ndarray) -> None:
        """Delete all edges incident to verts, maintaining triangle counts
        and queueing newly bad outside edges."""
        g = self.graph
        num, den = self._eps if self._eps is not None else (0, 1)
        _kernels._remove_vertices(np.asarray(verts, dtype=np.int32),
                                  g.indptr, g.indices, g.edge_ids, self.alive,
                                  self.tri, self.live_deg, g.edges_u,
                                  g.edges_v, g.degrees, num, den,
                                  self.queue, self.in_queue, self.state)

    def count_clean_violations(self, epsilon=None, sample: int = None,
                               rng: np.random.Generator = None) -> int:
        """Rescan live edges (all, or a sample) recomputing triangle counts
        from scratch; returns how many break the maintained-count or
        fixpoint condition."""
        if epsilon is None:
            if self._eps is None:
                raise ValueError("no epsilon bound yet")
            num, den = self._eps
        else:
            num, den = _fraction_parts(epsilon, _EPS_DEN_CAP)
        live = np.flatnonzero(self.alive)
        if sample is not None and live.size > sample:
            if rng is None:
                rng = np.random.default_rng(0)
            live = np.sort(rng.choice(live, size=sample, replace=False))
        g = self.graph
        return int(_kernels._verify_edges(live.astype(np.int64), g.indptr,
                                          g.indices, g.edge_ids, self.alive,
                                          self.tri, g.edges_u, g.edges_v,
                                          g.degrees, num, den))


class SetFamily:
    """Ordered disjoint vertex sets plus the unassigned remainder.

    sets[i] is a sorted int32 array of internal ids; order is extraction
    order. Every vertex is in at most one set; the rest are unassigned.
    """

    __slots__ = ("n", "sets", "assignment")

    def __init__(self, n: int, sets, assignment: np.ndarray = None):
        self.n = int(n)
        clean_sets = []
        for t in sets:
            a = np.sort(np.asarray(t, dtype=np.int32))
            if a.size == 0:
                raise ValueError("empty set in family")
            clean_sets.append(a)
        self.sets = clean_sets
        if assignment is None:
            assignment = np.full(self.n, -1, dtype=np.int32)
            for i, t in enumerate(clean_sets):
                if t[0] < 0 or t[-1] >= self.n:
                    raise ValueError(f"vertex id {int(t[0] if t[0] < 0 else t[-1])} out of range")
                if t.size > 1 and (t[1:] == t[:-1]).any():
                    raise ValueError("duplicate vertex within a set")
                if (assignment[t] != -1).any():
                    raise ValueError("sets overlap")
                assignment[t] = i
        self.assignment = assignment

    @property
    def num_sets(self) -> int:
        return len(self.sets)

    @property
    def unassigned(self) -> np.ndarray:
        return np.flatnonzero(self.assignment == -1).astype(np.int32)

    @property
    def num_unassigned(self) -> int:
        return int(np.count_nonzero(self.assignment == -1))

    @property
    def sizes(self) -> np.ndarray:
        return np.array([t.size for t in self.sets], dtype=np.int64)

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, i):
        return self.sets[i]

    def __repr__(self):
        return f"SetFamily(num_sets={len(self.sets)}, unassigned={self.num_unassigned}, n={self.n})"


def clean(h: WorkingSubgraph, epsilon) -> int:
    """Delete edges in fewer than epsilon * (d_u + d_v) triangles of H
    until none remain; returns how many edges went."""
    return h.clean(epsilon)


def _best_prefix(e_base: int, gains, s0: int) -> int:
    # Exact prefix-density argmax: compare E_p / C(s0 + p, 2) by cross
    # multiplication in Python ints, ties to the shorter prefix.
    best_p = 0
    best_e = e_base
    best_pairs = s0 * (s0 - 1) // 2
    e = e_base
    size = s0
    for p, gain in enumerate(gains, start=1):
        e += gain
        size += 1
        pairs = size * (size - 1) // 2
        if e * best_pairs > best_e * pairs:
            best_p = p
            best_e = e
            best_pairs = pairs
    return best_p


def two_hop_select(h: WorkingSubgraph, v: int, neighborhood, params: ExtractionParams) -> np.ndarray:
    """Pick two-hop vertices to join {v} u N, returned as sorted ids.

    Candidates are live vertices outside {v} u N with at least one live
    edge into N; t_u counts live triangles u forms with two members of N.
    greedy_sweep orders candidates by t_u descending (ties by id) and keeps
    the density-maximizing prefix; beta_threshold keeps u with
    t_u > beta * d_v**2, strict.
    """
    g = h.graph
    v = int(v)
    N = np.ascontiguousarray(neighborhood, dtype=np.int32)
    ncand, live2, any2 = _kernels._two_hop_scan(
        v, N, g.indptr, g.indices, g.edge_ids, h.alive,
        h._mark, h._bcnt, h._tcnt, h._touched)
    cands = h._touched[:ncand].copy()
    try:
        if ncand == 0:
            return np.empty(0, dtype=np.int32)
        t = h._tcnt[cands]
        if params.two_hop_mode == BETA_THRESHOLD:
            bn, bd = params.beta_parts
            rhs = bn * int(g.degrees[v]) ** 2
            keep = [c for c, tc in zip(cands.tolist(), t.tolist()) if tc * bd > rhs]
            return np.sort(np.array(keep, dtype=np.int32))
        order = np.lexsort((cands, -t))
        ranked = np.ascontiguousarray(cands[order])
        gains = np.empty(ncand, dtype=np.int64)
        use_alive = 1 if params.sweep_density == "h" else 0
        _kernels._sweep_gains(ranked, g.indptr, g.indices, g.edge_ids,
                              h.alive, use_alive, h._mark, gains)
        e_base = int(live2) if use_alive else int(any2)
        p = _best_prefix(e_base, [int(x) for x in gains], 1 + N.shape[0])
        return np.sort(ranked[:p])
    finally:
        h._mark[v] = 0
        h._mark[N] = 0
        if ncand:
            h._mark[cands] = 0
            h._bcnt[cands] = 0
            h._tcnt[cands] = 0


def extract_one(h: WorkingSubgraph, params: ExtractionParams, _pre_remove=None) -> np.ndarray:
    """Extract one set from a clean, nonempty H and remove it.

    Returns the sorted vertex array {seed} u N u two-hop selection.
    """
    if h.live_vertex_count == 0:
        raise ValueError("extract_one called on an empty working subgraph")
    v = h.seed_vertex()
    N = h.live_neighbors(v)
    if _pre_remove is not None:
        _pre_remove(h, v, N)
    sel = two_hop_select(h, v, N, params)
    T = np.sort(np.concatenate([np.array([v], dtype=np.int32), N, sel]))
    h.remove_set(T)
    return T


def run(g: Graph, params: ExtractionParams = None, *, threads: int = 1,
        counts: np.ndarray = None, verify: str = "off",
        on_extract=None) -> SetFamily:
    """Full pipeline on one graph: alternate clean and extract until H is
    empty. Deterministic for fixed (g, params). Growing is separate; see
    the postprocess module.

    verify: "off", "sample", or "full" controls rescans of the clean
    fixpoint after every clean (raises AssertionError on violation).
    on_extract: optional callback (h, seed, neighborhood) fired before
    each removal, for instrumentation.
    """
    if params is None:
        params = ExtractionParams()
    if verify not in ("off", "sample", "full"):
        raise ValueError("verify must be off, sample, or full")
    h = WorkingSubgraph(g, counts=counts, threads=threads)
    assignment = np.full(g.n, -1, dtype=np.int32)
    sets = []
    rng = np.random.default_rng(0)
    while True:
        h.clean(params.epsilon)
        if verify != "off" and h.live_edge_count:
            sample = _VERIFY_SAMPLE if verify == "sample" else None
            bad = h.count_clean_violations(sample=sample, rng=rng)
            if bad:
                raise AssertionError(f"clean fixpoint violated on {bad} edges")
        if h.live_vertex_count == 0:
            break
        T = extract_one(h, params, _pre_remove=on_extract)
        assignment[T] = len(sets)
        sets.append(T)
    return SetFamily(g.n, sets, assignment=assignment)
