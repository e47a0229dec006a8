from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import rtrx

from conftest import (build, clique_edges, complete_multipartite_edges,
                      cycle_edges, gnp_edges, path_edges, star_edges)
from oracles import clean_fixpoint_oracle, norm_edges


def live_edge_set(h):
    return {tuple(e) for e in h.live_edges().tolist()}


def sweep_select_oracle(n, live_edges, v, neighborhood, density_edges=None):
    """Reference greedy sweep. density_edges defaults to the live edges
    (mode 'h'); pass the full G edge list for mode 'g'."""
    live = set(map(tuple, map(sorted, live_edges)))
    if density_edges is None:
        density_edges = live
    dens = set(map(tuple, map(sorted, density_edges)))
    adj = {}
    for a, b in live:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    nset = set(int(x) for x in neighborhood)
    excl = nset | {int(v)}
    cands = [u for u in sorted(adj) if u not in excl and adj[u] & nset]
    n_pairs = [(a, b) for a, b in live if a in nset and b in nset]
    t = {u: sum(1 for a, b in n_pairs if a in adj[u] and b in adj[u])
         for u in cands}
    order = sorted(cands, key=lambda u: (-t[u], u))
    s = excl.copy()
    e_cur = sum(1 for a, b in dens if a in s and b in s)
    best_d = Fraction(e_cur, comb(len(s), 2))
    best_p = 0
    for p, u in enumerate(order, 1):
        e_cur += sum(1 for w in s if tuple(sorted((u, w))) in dens)
        s.add(u)
        d = Fraction(e_cur, comb(len(s), 2))
        if d > best_d:
            best_d, best_p = d, p
    return sorted(order[:best_p])


# ---- params ------------------------------------------------------------

@pytest.mark.parametrize("kw", [
    dict(epsilon=0), dict(epsilon=1), dict(epsilon=1.5), dict(epsilon=-0.2),
    dict(beta=-0.1), dict(grow_k=-1), dict(two_hop_mode="magic"),
    dict(sweep_density="x"),
])
def test_params_validation(kw):
    with pytest.raises(ValueError):
        rtrx.ExtractionParams(**kw)


def test_params_accept_exact_fractions():
    p = rtrx.ExtractionParams(epsilon=Fraction(3, 10), beta=Fraction(1, 4))
    assert p.epsilon_parts == (3, 10)
    assert p.beta_parts == (1, 4)
    assert rtrx.ExtractionParams(epsilon="3/10").epsilon_parts == (3, 10)
    # floats mean their decimal reading, not their binary expansion
    assert rtrx.ExtractionParams(epsilon=0.1).epsilon_parts == (1, 10)


# ---- clean -------------------------------------------------------------

@pytest.mark.parametrize("edges", [
    cycle_edges(5), star_edges(9), path_edges(7), cycle_edges(8),
])
def test_clean_wipes_triangle_free_graphs(edges):
    h = rtrx.WorkingSubgraph(build(edges))
    deleted = h.clean(0.1)
    assert deleted == len(edges)
    assert h.live_edge_count == 0
    assert h.live_vertex_count == 0


def test_clean_keeps_k4():
    h = rtrx.WorkingSubgraph(build(clique_edges(4)))
    assert h.clean(0.1) == 0
    assert h.live_edge_count == 6


def test_clean_k4_with_pendant():
    # pendant edge sits in no triangle; the clique is untouched
    h = rtrx.WorkingSubgraph(build(clique_edges(4) + [(3, 4)]))
    assert h.clean(0.1) == 1
    assert h.live_edge_count == 6
    assert h.live_vertex_count == 4
    assert live_edge_set(h) == set(clique_edges(4))


def test_clean_cascade():
    # chain of triangles sharing single vertices: the end triangle's loss
    # propagates nowhere, but a high epsilon unravels everything
    tris = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5), (5, 6), (4, 6)]
    h = rtrx.WorkingSubgraph(build(tris))
    h.clean(0.9)
    assert h.live_edge_count == 0


def test_clean_idempotent_and_returns_count():
    g = build(gnp_edges(40, 0.2, seed=5))
    h = rtrx.WorkingSubgraph(g)
    first = h.clean(0.2)
    assert first > 0
    assert h.clean(0.2) == 0


def test_clean_epsilon_validation():
    h = rtrx.WorkingSubgraph(build(clique_edges(3)))
    for bad in (0, 1, 2, -0.5):
        with pytest.raises(ValueError, match="strictly between"):
            h.clean(bad)


@given(st.integers(4, 28), st.floats(0.08, 0.5), st.integers(0, 10 ** 6),
       st.sampled_from([Fraction(1, 10), Fraction(1, 4), Fraction(1, 2),
                        Fraction(9, 10)]))
@settings(max_examples=40)
def test_clean_fixpoint_matches_oracle(n, p, seed, eps):
    edges = gnp_edges(n, p, seed)
    if not edges:
        return
    h = rtrx.WorkingSubgraph(build(edges, n=n))
    h.clean(eps)
    assert live_edge_set(h) == clean_fixpoint_oracle(n, edges, eps)
    assert h.count_clean_violations() == 0


def test_clean_float_epsilon_means_decimal():
    # 1/3 as a float must behave as the exact rational 1/3
    edges = gnp_edges(30, 0.3, seed=9)
    ha = rtrx.WorkingSubgraph(build(edges))
    hb = rtrx.WorkingSubgraph(build(edges))
    ha.clean(Fraction(1, 3))
    hb.clean(1 / 3)
    assert live_edge_set(ha) == live_edge_set(hb)


def test_raising_epsilon_reaches_the_fresh_fixpoint():
    # cleaning at a lower threshold first must not change the outcome
    edges = gnp_edges(35, 0.25, seed=11)
    h1 = rtrx.WorkingSubgraph(build(edges))
    h1.clean(0.1)
    h1.clean(0.5)
    h2 = rtrx.WorkingSubgraph(build(edges))
    h2.clean(0.5)
    assert live_edge_set(h1) == live_edge_set(h2)


def test_clean_monotone_in_epsilon():
    edges = gnp_edges(30, 0.3, seed=3)
    survivors = []
    for eps in (Fraction(1, 10), Fraction(3, 10), Fraction(3, 5)):
        h = rtrx.WorkingSubgraph(build(edges))
        h.clean(eps)
        survivors.append(live_edge_set(h))
    assert survivors[2] <= survivors[1] <= survivors[0]


def test_violation_counter():
    h = rtrx.WorkingSubgraph(build(clique_edges(4) + [(3, 4)]))
    with pytest.raises(ValueError, match="no epsilon bound"):
        h.count_clean_violations()
    assert h.count_clean_violations(epsilon=0.1) == 1  # the pendant edge
    h.clean(0.1)
    assert h.count_clean_violations() == 0


def test_working_subgraph_rejects_bad_counts():
    g = build(clique_edges(3))
    with pytest.raises(ValueError, match="one entry per edge"):
        rtrx.WorkingSubgraph(g, counts=np.zeros(99, dtype=np.int64))


# ---- seeds and extraction ----------------------------------------------

def test_seed_prefers_min_degree_then_lowest_id():
    # 0..3 form K4 (degree 3), vertex 4 hangs off 3 (degree 1)
    h = rtrx.WorkingSubgraph(build(clique_edges(4) + [(3, 4)]))
    assert h.seed_vertex() == 4
    h.clean(0.1)
    assert h.seed_vertex() == 0


def test_extract_one_on_empty_raises():
    h = rtrx.WorkingSubgraph(build(cycle_edges(5)))
    h.clean(0.1)
    with pytest.raises(ValueError, match="empty"):
        rtrx.extract_one(h, rtrx.ExtractionParams())


def test_extract_one_takes_whole_clique():
    h = rtrx.WorkingSubgraph(build(clique_edges(4)))
    T = rtrx.extract_one(h, rtrx.ExtractionParams())
    assert T.tolist() == [0, 1, 2, 3]
    assert h.live_vertex_count == 0


def test_extract_order_on_two_cliques():
    # seed degree 4 < 6, so the K5 comes out before the K7
    k5 = clique_edges(5)
    k7 = clique_edges(7, offset=5)
    h = rtrx.WorkingSubgraph(build(k5 + k7))
    params = rtrx.ExtractionParams()
    h.clean(params.epsilon)
    t1 = rtrx.extract_one(h, params)
    assert t1.tolist() == [0, 1, 2, 3, 4]
    t2 = rtrx.extract_one(h, params)
    assert t2.tolist() == list(range(5, 12))
    assert h.live_vertex_count == 0


def test_run_two_cliques_either_mode():
    g = build(clique_edges(5) + clique_edges(7, offset=5))
    for params in (rtrx.ExtractionParams(),
                   rtrx.ExtractionParams(two_hop_mode="beta_threshold", beta=0.25)):
        fam = rtrx.run(g, params)
        assert [t.tolist() for t in fam] == [[0, 1, 2, 3, 4],
                                             list(range(5, 12))]
        assert fam.num_unassigned == 0


def test_run_complete_tripartite():
    # seed 0, N = the other two parts; candidates 1 and 2 tie on density,
    # and a density tie keeps the shorter prefix, so only 1 joins
    g = build(complete_multipartite_edges(3, 3, 3))
    fam = rtrx.run(g)
    assert fam.num_sets == 1
    assert fam[0].tolist() == [0, 1, 3, 4, 5, 6, 7, 8]
    assert fam.unassigned.tolist() == [2]


# ---- two-hop selection -------------------------------------------------

def test_two_hop_empty_neighborhood():
    h = rtrx.WorkingSubgraph(build(clique_edges(4)))
    sel = rtrx.two_hop_select(h, 0, np.empty(0, dtype=np.int32),
                              rtrx.ExtractionParams())
    assert sel.size == 0


def test_two_hop_candidates_need_a_live_edge_into_n():
    # 4 touches N={1,2}; 5 only touches 4, so 5 is never a candidate
    edges = [(0, 1), (0, 2), (1, 2), (1, 4), (2, 4), (4, 5)]
    h = rtrx.WorkingSubgraph(build(edges))
    sel = rtrx.two_hop_select(h, 0, np.array([1, 2], dtype=np.int32),
                              rtrx.ExtractionParams())
    assert 5 not in sel.tolist()


def beta_fixture(n_edges_inside):
    # seed 0 with N = {1..10}; candidate 11 adjacent to all of N;
    # t_11 equals the number of edges inside N
    pairs = [(a, b) for a in range(1, 11) for b in range(a + 1, 11)]
    edges = star_edges(10) + [(11, x) for x in range(1, 11)]
    edges += pairs[:n_edges_inside]
    return rtrx.WorkingSubgraph(build(edges)), np.arange(1, 11, dtype=np.int32)


def test_beta_threshold_is_strict():
    # d_v = 10 and beta = 0.25 put the bar at exactly 25 triangles
    params = rtrx.ExtractionParams(two_hop_mode="beta_threshold", beta=0.25)
    h, N = beta_fixture(25)
    assert rtrx.two_hop_select(h, 0, N, params).tolist() == []
    h, N = beta_fixture(26)
    assert rtrx.two_hop_select(h, 0, N, params).tolist() == [11]


def test_beta_threshold_uses_decimal_not_binary_float():
    # 0.29 * 10^2 is exactly 29; binary float arithmetic would read it as
    # 28.999999999999996 and wrongly include a candidate with t = 29
    params = rtrx.ExtractionParams(two_hop_mode="beta_threshold", beta=0.29)
    h, N = beta_fixture(29)
    assert rtrx.two_hop_select(h, 0, N, params).tolist() == []
    h, N = beta_fixture(30)
    assert rtrx.two_hop_select(h, 0, N, params).tolist() == [11]


def test_beta_zero_still_requires_a_triangle():
    params = rtrx.ExtractionParams(two_hop_mode="beta_threshold", beta=0)
    h, N = beta_fixture(0)
    assert rtrx.two_hop_select(h, 0, N, params).tolist() == []
    h, N = beta_fixture(1)
    assert rtrx.two_hop_select(h, 0, N, params).tolist() == [11]


def test_beta_half_excludes_everything():
    # t_u <= C(|N|,2) < beta * d_v^2 at beta = 0.5, so nothing qualifies
    params = rtrx.ExtractionParams(two_hop_mode="beta_threshold", beta=0.5)
    h, N = beta_fixture(45)
    assert rtrx.two_hop_select(h, 0, N, params).tolist() == []


@given(st.integers(6, 26), st.floats(0.15, 0.55), st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_sweep_matches_oracle_after_cleaning(n, p, seed):
    edges = gnp_edges(n, p, seed)
    if not edges:
        return
    h = rtrx.WorkingSubgraph(build(edges, n=n))
    h.clean(0.1)
    if h.live_vertex_count == 0:
        return
    v = h.seed_vertex()
    N = h.live_neighbors(v)
    live = [tuple(e) for e in h.live_edges().tolist()]
    got = rtrx.two_hop_select(h, v, N, rtrx.ExtractionParams())
    assert got.tolist() == sweep_select_oracle(n, live, v, N)
    got_g = rtrx.two_hop_select(
        h, v, N, rtrx.ExtractionParams(sweep_density="g"))
    assert got_g.tolist() == sweep_select_oracle(
        n, live, v, N, density_edges=norm_edges(edges))


def test_sweep_density_modes_agree_without_deletions():
    # before any edge is deleted the two density sources coincide
    edges = gnp_edges(24, 0.4, seed=17)
    h = rtrx.WorkingSubgraph(build(edges))
    v = h.seed_vertex()
    N = h.live_neighbors(v)
    a = rtrx.two_hop_select(h, v, N, rtrx.ExtractionParams(sweep_density="h"))
    b = rtrx.two_hop_select(h, v, N, rtrx.ExtractionParams(sweep_density="g"))
    assert a.tolist() == b.tolist()


def test_two_hop_select_reusable():
    # scratch state must be fully reset between calls
    edges = gnp_edges(20, 0.4, seed=23)
    h = rtrx.WorkingSubgraph(build(edges))
    h.clean(0.1)
    v = h.seed_vertex()
    N = h.live_neighbors(v)
    p = rtrx.ExtractionParams()
    first = rtrx.two_hop_select(h, v, N, p).tolist()
    second = rtrx.two_hop_select(h, v, N, p).tolist()
    assert first == second


# ---- full runs ---------------------------------------------------------

def test_run_rejects_bad_verify():
    with pytest.raises(ValueError, match="verify"):
        rtrx.run(build(clique_edges(3)), verify="loud")


@given(st.integers(8, 40), st.floats(0.1, 0.5), st.integers(0, 10 ** 6))
@settings(max_examples=30)
def test_run_posts(n, p, seed):
    edges = gnp_edges(n, p, seed)
    if not edges:
        return
    g = build(edges, n=n)
    fam = rtrx.run(g, verify="full")
    seen = np.zeros(n, dtype=bool)
    for t in fam:
        assert t.size >= 1
        assert np.all(np.diff(t) > 0)
        assert not seen[t].any()
        seen[t] = True
    assert np.array_equal(np.flatnonzero(~seen), fam.unassigned)


def test_run_deterministic_and_thread_invariant():
    g = build(gnp_edges(60, 0.25, seed=41))
    fams = [rtrx.run(g), rtrx.run(g), rtrx.run(g, threads=3)]
    base = [t.tolist() for t in fams[0]]
    for fam in fams[1:]:
        assert [t.tolist() for t in fam] == base


def test_run_accepts_precomputed_counts():
    g = build(gnp_edges(30, 0.3, seed=7))
    counts = rtrx.count_edge_triangle_array(g)
    a = rtrx.run(g, counts=counts)
    b = rtrx.run(g)
    assert [t.tolist() for t in a] == [t.tolist() for t in b]


def test_every_extracted_vertex_is_within_two_hops_of_its_seed():
    g = build(gnp_edges(50, 0.3, seed=13))
    snaps = []

    def grab(h, seed, neighborhood):
        snaps.append((seed, h.live_edges()))

    fam = rtrx.run(g, on_extract=grab)
    assert len(snaps) == fam.num_sets
    for (seed, live), t in zip(snaps, fam):
        adj = {}
        for a, b in live.tolist():
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        reach = {seed} | adj.get(seed, set())
        reach |= {w for x in list(reach) for w in adj.get(x, set())}
        assert set(t.tolist()) <= reach


# ---- SetFamily ---------------------------------------------------------

def test_set_family_validation():
    with pytest.raises(ValueError, match="empty set"):
        rtrx.SetFamily(5, [[]])
    with pytest.raises(ValueError, match="out of range"):
        rtrx.SetFamily(5, [[0, 5]])
    with pytest.raises(ValueError, match="duplicate"):
        rtrx.SetFamily(5, [[1, 1]])
    with pytest.raises(ValueError, match="overlap"):
        rtrx.SetFamily(5, [[0, 1], [1, 2]])


def test_set_family_accessors():
    fam = rtrx.SetFamily(6, [[3, 1], [0, 5]])
    assert fam.num_sets == len(fam) == 2
    assert fam[0].tolist() == [1, 3]
    assert fam.sizes.tolist() == [2, 2]
    assert fam.unassigned.tolist() == [2, 4]
    assert fam.num_unassigned == 2
    assert [t.tolist() for t in fam] == [[1, 3], [0, 5]]
