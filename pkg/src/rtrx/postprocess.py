"""Coverage growing: pull unassigned vertices into well-connected sets.

A pass freezes current membership, then for each unassigned vertex counts
its input-graph neighbors inside every set; a vertex with at least k
neighbors in its best set moves there (ties toward the earliest-extracted
set). Freezing makes the outcome independent of processing order.
"""

from __future__ import annotations

import numpy as np

from ._kernels import _grow_pass
from .extractor import SetFamily
from .graph import Graph

__all__ = ["grow"]


def grow(g: Graph, fam: SetFamily, k: int, iterate: bool = False) -> SetFamily:
    """Return an enlarged family; the input family is left untouched.

    k must be at least 1. With iterate=True passes repeat (re-freezing
    each time) until no vertex moves; default is the single pass.
    """
    k = int(k)
    if k < 1:
        raise ValueError("k must be at least 1")
    if fam.n != g.n:
        raise ValueError("family does not match graph")
    assignment = np.array(fam.assignment, dtype=np.int32, copy=True)
    nsets = fam.num_sets
    cnt = np.zeros(max(nsets, 1), dtype=np.int64)
    touched = np.empty(max(nsets, 1), dtype=np.int32)
    while True:
        unassigned = np.flatnonzero(assignment == -1).astype(np.int32)
        if unassigned.size == 0 or nsets == 0:
            break
        frozen = assignment.copy()
        moved = _grow_pass(unassigned, g.indptr, g.indices, frozen,
                           assignment, k, cnt, touched)
        if not iterate or moved == 0:
            break
    sets = _group_sets(assignment, nsets)
    return SetFamily(g.n, sets, assignment=assignment)


def _group_sets(assignment: np.ndarray, nsets: int):
    # Stable argsort groups members by set index with ids ascending inside
    # each group, so one sort covers every set.
    order = np.argsort(assignment, kind="stable").astype(np.int32)
    keys = assignment[order]
    starts = np.searchsorted(keys, np.arange(nsets))
    ends = np.searchsorted(keys, np.arange(nsets), side="right")
    return [order[starts[i]:ends[i]] for i in range(nsets)]
