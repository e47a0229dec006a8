"""Compact immutable simple graph with original-label bookkeeping.

Input vertices carry unsigned integer labels up to 2**64 - 1; internally
they are renumbered 0..n-1 in first-appearance order. No self-loops, no
parallel edges, adjacency stored symmetric CSR with each neighbor list
strictly increasing.
"""

from __future__ import annotations

import gzip
import io
import os
from typing import Iterable, Union

import numpy as np

from ._kernels import _induced_edge_count

__all__ = [
    "Graph",
    "EdgeListFormatError",
    "load_edge_list",
    "from_edges",
    "induced_edge_count",
    "write_edge_list",
]

_MAX_LABEL = 2**64 - 1


class EdgeListFormatError(ValueError):
    """Malformed edge-list input; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class Graph:
    """Immutable CSR adjacency plus a canonical edge array.

    Attributes:
        n: vertex count.
        m: undirected edge count.
        indptr: int64[n+1] CSR offsets.
        indices: int32[2m] neighbor ids, strictly increasing per vertex.
        edge_ids: int32[2m] undirected edge id aligned with indices; both
            directions of an edge share one id.
        edges_u, edges_v: int32[m] endpoints with edges_u[i] < edges_v[i],
            sorted lexicographically.
        degrees: int64[n].
        labels: uint64[n] mapping internal id to original label.
    """

    __slots__ = ("n", "m", "indptr", "indices", "edge_ids", "edges_u",
                 "edges_v", "degrees", "labels", "_label_to_id")

    def __init__(self, n: int, edges_u: np.ndarray, edges_v: np.ndarray,
                 labels: np.ndarray):
        # Trusted constructor: edges must already be canonical (u < v,
        # lexicographically sorted, no duplicates). Use load_edge_list or
        # from_edges instead of calling this directly.
        m = int(edges_u.shape[0])
        self.n = int(n)
        self.m = m
        self.edges_u = np.ascontiguousarray(edges_u, dtype=np.int32)
        self.edges_v = np.ascontiguousarray(edges_v, dtype=np.int32)
        self.labels = np.ascontiguousarray(labels, dtype=np.uint64)
        if self.labels.shape[0] != self.n:
            raise ValueError("label array must have one entry per vertex")

        src = np.concatenate([self.edges_u, self.edges_v])
        dst = np.concatenate([self.edges_v, self.edges_u])
        eid = np.concatenate([np.arange(m, dtype=np.int32)] * 2) if m else np.empty(0, np.int32)
        order = np.lexsort((dst, src))
        self.indices = np.ascontiguousarray(dst[order])
        self.edge_ids = np.ascontiguousarray(eid[order])
        counts = np.bincount(src, minlength=self.n) if m else np.zeros(self.n, np.int64)
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(counts, out=self.indptr[1:])
        self.degrees = np.diff(self.indptr)
        self._label_to_id = None
        for arr in (self.indptr, self.indices, self.edge_ids, self.edges_u,
                    self.edges_v, self.degrees, self.labels):
            arr.setflags(write=False)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def edge_id(self, u: int, v: int) -> int:
        """Edge id of (u, v), or -1 if not an edge."""
        s, e = self.indptr[u], self.indptr[u + 1]
        pos = s + np.searchsorted(self.indices[s:e], v)
        if pos < e and self.indices[pos] == v:
            return int(self.edge_ids[pos])
        return -1

    def id_of_label(self, label: int) -> int:
        """Internal id for an original label; KeyError if unknown."""
        if self._label_to_id is None:
            self._label_to_id = {int(l): i for i, l in enumerate(self.labels)}
        return self._label_to_id[int(label)]

    def has_label(self, label: int) -> bool:
        if self._label_to_id is None:
            self._label_to_id = {int(l): i for i, l in enumerate(self.labels)}
        return int(label) in self._label_to_id

    def canonical_label_edges(self) -> np.ndarray:
        """(m, 2) uint64 array of label pairs, smaller label first, sorted."""
        lu = self.labels[self.edges_u]
        lv = self.labels[self.edges_v]
        a = np.minimum(lu, lv)
        b = np.maximum(lu, lv)
        order = np.lexsort((b, a))
        return np.stack([a[order], b[order]], axis=1)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _parse_label(token: str, lineno: int) -> int:
    if not token.isdigit():
        raise EdgeListFormatError(lineno, f"malformed token {token!r}")
    val = int(token)
    if val > _MAX_LABEL:
        raise EdgeListFormatError(lineno, f"malformed token {token!r}: label exceeds 64 bits")
    return val


def _open_source(source):
    if isinstance(source, (str, os.PathLike)):
        path = os.fspath(source)
        if path.endswith(".gz"):
            return gzip.open(path, "rt"), True
        return open(path, "rt"), True
    if isinstance(source, io.TextIOBase):
        return source, False
    if hasattr(source, "read"):
        # binary stream
        return io.TextIOWrapper(source), False
    raise TypeError("source must be a path or an open file")


def load_edge_list(source) -> Graph:
    """Parse whitespace-separated label pairs, one edge per line.

    Lines starting with '#' are comments. Self-loops are dropped, duplicate
    and reversed-duplicate edges merged, directed inputs symmetrized, and
    labels remapped to 0..n-1 in first-appearance order. `source` is a path
    (gzip handled by suffix) or an open text/binary stream.
    """
    f, close = _open_source(source)
    us: list = []
    vs: list = []
    try:
        for lineno, line in enumerate(f, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 2:
                raise EdgeListFormatError(
                    lineno, f"expected two tokens, found {len(parts)}")
            a = _parse_label(parts[0], lineno)
            b = _parse_label(parts[1], lineno)
            if a != b:
                us.append(a)
                vs.append(b)
    finally:
        if close:
            f.close()
    if not us:
        raise ValueError("no edges")
    return _build_from_labels(np.array(us, dtype=np.uint64),
                              np.array(vs, dtype=np.uint64))


def _build_from_labels(us: np.ndarray, vs: np.ndarray) -> Graph:
    # First-appearance relabeling: rank unique labels by where they first
    # occur in the interleaved endpoint sequence.
    flat = np.empty(us.shape[0] * 2, dtype=np.uint64)
    flat[0::2] = us
    flat[1::2] = vs
    uniq, first, inv = np.unique(flat, return_index=True, return_inverse=True)
    appearance = np.argsort(first, kind="stable")
    rank = np.empty(uniq.shape[0], dtype=np.int64)
    rank[appearance] = np.arange(uniq.shape[0])
    ids = rank[inv]
    labels = uniq[appearance]
    n = uniq.shape[0]
    if n >= 2**31:
        raise ValueError("too many vertices for 32-bit internal ids")
    iu = ids[0::2]
    iv = ids[1::2]
    cu, cv = _canonical_dedup(iu, iv)
    return Graph(n, cu, cv, labels)


def _canonical_dedup(iu: np.ndarray, iv: np.ndarray):
    cu = np.minimum(iu, iv)
    cv = np.maximum(iu, iv)
    order = np.lexsort((cv, cu))
    cu = cu[order]
    cv = cv[order]
    if cu.shape[0]:
        keep = np.ones(cu.shape[0], dtype=bool)
        keep[1:] = (cu[1:] != cu[:-1]) | (cv[1:] != cv[:-1])
        cu = cu[keep]
        cv = cv[keep]
    return cu.astype(np.int32), cv.astype(np.int32)


def from_edges(edges: Union[np.ndarray, Iterable], num_vertices: int = None) -> Graph:
    """Build a Graph from internal-id pairs, labels = identity.

    Self-loops are dropped and duplicates merged like load_edge_list, but
    ids are taken as-is. With explicit num_vertices, trailing isolated
    vertices are representable; otherwise n = max id + 1.
    """
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                     dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("edges must be an iterable of (u, v) pairs")
    if arr.size and arr.min() < 0:
        raise ValueError("vertex ids must be nonnegative")
    mask = arr[:, 0] != arr[:, 1]
    iu = arr[mask, 0]
    iv = arr[mask, 1]
    if num_vertices is None:
        if iu.size == 0:
            raise ValueError("no edges")
        num_vertices = int(max(iu.max(), iv.max())) + 1
    else:
        num_vertices = int(num_vertices)
        if iu.size and max(int(iu.max()), int(iv.max())) >= num_vertices:
            raise ValueError("vertex id out of range")
    if num_vertices >= 2**31:
        raise ValueError("too many vertices for 32-bit internal ids")
    cu, cv = _canonical_dedup(iu, iv)
    labels = np.arange(num_vertices, dtype=np.uint64)
    return Graph(num_vertices, cu, cv, labels)


def induced_edge_count(g: Graph, s) -> int:
    """Number of graph edges with both endpoints in s."""
    s = _check_vertex_set(g, s)
    if s.size < 2:
        return 0
    mark = np.zeros(g.n, dtype=np.int8)
    return int(_induced_edge_count(s, mark, g.indptr, g.indices))


def _check_vertex_set(g: Graph, s) -> np.ndarray:
    s = np.unique(np.asarray(list(s) if not isinstance(s, np.ndarray) else s,
                             dtype=np.int64))
    if s.size and (s[0] < 0 or s[-1] >= g.n):
        bad = int(s[0]) if s[0] < 0 else int(s[-1])
        raise ValueError(f"vertex id {bad} outside 0..{g.n - 1}")
    return s.astype(np.int32)


def write_edge_list(g: Graph, out) -> None:
    """Write the canonical edge list: each edge once, smaller original
    label first, lines sorted."""
    close = False
    if isinstance(out, (str, os.PathLike)):
        out = open(out, "w")
        close = True
    try:
        for a, b in g.canonical_label_edges():
            out.write(f"{a} {b}\n")
    finally:
        if close:
            out.close()
