import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import rtrx

from conftest import build, clique_edges, gnp_edges
from oracles import grow_oracle


def fam_sets(fam):
    return [t.tolist() for t in fam]


def test_grow_moves_to_the_qualifying_set():
    # v adjacent to all of T1 (10 members) and all of T2 (3 members)
    t1, t2, v = list(range(10)), [10, 11, 12], 13
    g = build([(v, x) for x in t1 + t2] + clique_edges(10) + [(10, 11)])
    fam = rtrx.SetFamily(14, [t1, t2])
    out = rtrx.grow(g, fam, 10)
    assert out[0].tolist() == t1 + [v]
    assert out[1].tolist() == t2
    assert out.num_unassigned == 0


def test_grow_threshold_is_inclusive_at_k():
    # 9 neighbors in the best set is one short of k=10
    t1, t2, v = list(range(10)), [10, 11, 12], 13
    g = build([(v, x) for x in t1[:9] + t2] + clique_edges(10) + [(10, 11)])
    fam = rtrx.SetFamily(14, [t1, t2])
    out = rtrx.grow(g, fam, 10)
    assert out.unassigned.tolist() == [v]
    assert rtrx.grow(g, fam, 9)[0].tolist() == t1 + [v]


def test_grow_picks_the_larger_tally():
    t1, t2, v = list(range(5)), list(range(5, 12)), 12
    g = build([(v, x) for x in t1 + t2])
    fam = rtrx.SetFamily(13, [t1, t2])
    out = rtrx.grow(g, fam, 2)
    assert v in out[1].tolist()
    assert out[0].tolist() == t1


def test_grow_tie_goes_to_the_earlier_set():
    t1, t2, v = [0, 1], [2, 3], 4
    g = build([(4, 0), (4, 1), (4, 2), (4, 3), (0, 1), (2, 3)])
    fam = rtrx.SetFamily(5, [t1, t2])
    out = rtrx.grow(g, fam, 2)
    assert out[0].tolist() == [0, 1, 4]
    # same graph, families swapped: still the earlier (now t2-first) set
    out2 = rtrx.grow(g, rtrx.SetFamily(5, [t2, t1]), 2)
    assert out2[0].tolist() == [2, 3, 4]


def test_grow_membership_is_frozen_during_a_pass():
    # 2 joins {0,1}; 3 counts only pass-start members, so 3 stays put
    g = build([(0, 1), (0, 2), (1, 2), (2, 3), (0, 3)])
    fam = rtrx.SetFamily(4, [[0, 1]])
    out = rtrx.grow(g, fam, 2)
    assert out[0].tolist() == [0, 1, 2]
    assert out.unassigned.tolist() == [3]
    # a second pass (iterate) picks 3 up once 2's membership is visible
    out2 = rtrx.grow(g, fam, 2, iterate=True)
    assert out2[0].tolist() == [0, 1, 2, 3]


def test_grow_validation():
    g = build([(0, 1)])
    fam = rtrx.SetFamily(2, [[0]])
    with pytest.raises(ValueError, match="at least 1"):
        rtrx.grow(g, fam, 0)
    with pytest.raises(ValueError):
        rtrx.grow(g, rtrx.SetFamily(3, [[0]]), 1)


def test_grow_identity_when_k_exceeds_max_degree():
    g = build(gnp_edges(25, 0.3, seed=2))
    fam = rtrx.run(g)
    out = rtrx.grow(g, fam, int(g.degrees.max()) + 1)
    assert fam_sets(out) == fam_sets(fam)


@given(st.integers(8, 32), st.floats(0.1, 0.5), st.integers(0, 10 ** 6),
       st.integers(1, 5))
@settings(max_examples=40)
def test_grow_matches_oracle(n, p, seed, k):
    edges = gnp_edges(n, p, seed)
    if not edges:
        return
    g = build(edges, n=n)
    rng = np.random.default_rng(seed)
    ids = rng.permutation(n)
    sets = [np.sort(ids[:3]), np.sort(ids[3:6])]
    fam = rtrx.SetFamily(n, sets)
    out = rtrx.grow(g, fam, k)
    assert out.assignment.tolist() == grow_oracle(n, edges, sets, k)


@given(st.integers(10, 40), st.floats(0.15, 0.5), st.integers(0, 10 ** 6),
       st.integers(1, 4))
@settings(max_examples=30)
def test_grow_is_monotone_and_justified(n, p, seed, k):
    edges = gnp_edges(n, p, seed)
    if not edges:
        return
    g = build(edges, n=n)
    fam = rtrx.run(g)
    out = rtrx.grow(g, fam, k)
    assert out.num_sets == fam.num_sets
    before = {v for t in fam for v in t.tolist()}
    for i in range(fam.num_sets):
        old, new = set(fam[i].tolist()), set(out[i].tolist())
        assert old <= new
        for v in new - old:
            # moved vertices were unassigned and meet the bar against the
            # pass-start membership
            assert v not in before
            hits = sum(1 for w in g.neighbors(v).tolist() if w in old)
            assert hits >= k
    assert set(out.unassigned.tolist()) <= set(fam.unassigned.tolist())
