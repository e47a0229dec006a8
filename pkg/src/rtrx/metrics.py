"""Quality metrics and family summary reports.

All densities are evaluated against the ORIGINAL input graph, not the
working subgraph: output sets are judged as subsets of the network they
came from. Coverage at threshold gamma is the percentage of all vertices
lying in sets that pass both the size filter and the density bar; for
overlapping families (external set files) vertices are counted once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._kernels import _induced_edge_count, _induced_triangle_count
from .extractor import SetFamily
from .graph import Graph

__all__ = [
    "edge_density",
    "triangle_density",
    "rtr_alpha",
    "coverage",
    "family_report",
    "FamilyReport",
    "SetRecord",
]


def _as_set_array(g: Graph, s) -> np.ndarray:
    a = np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64)
    a = np.unique(a)
    if a.size and (a[0] < 0 or a[-1] >= g.n):
        bad = int(a[0]) if a[0] < 0 else int(a[-1])
        raise ValueError(f"vertex id {bad} outside 0..{g.n - 1}")
    return a.astype(np.int32)


def edge_density(g: Graph, s) -> float:
    """Induced edges over C(|s|, 2); needs at least 2 vertices."""
    a = _as_set_array(g, s)
    if a.size < 2:
        raise ValueError("edge density needs at least 2 vertices")
    mark = np.zeros(g.n, dtype=np.int8)
    e = _induced_edge_count(a, mark, g.indptr, g.indices)
    return 2.0 * e / (a.size * (a.size - 1))


def triangle_density(g: Graph, s) -> float:
    """Induced triangles over C(|s|, 3); needs at least 3 vertices."""
    a = _as_set_array(g, s)
    if a.size < 3:
        raise ValueError("triangle density needs at least 3 vertices")
    mark = np.zeros(g.n, dtype=np.int8)
    t = _induced_triangle_count(a, mark, g.indptr, g.indices)
    k = a.size
    return 6.0 * t / (k * (k - 1) * (k - 2))


def rtr_alpha(g: Graph, s) -> float:
    """Largest alpha for which s is alpha-regularly triangle-rich.

    That is min(triangle density, min over members of min(d_v/|s|, |s|/d_v))
    with original degrees, clamped to [0, 1].
    """
    a = _as_set_array(g, s)
    td = triangle_density(g, a)
    size = a.size
    degs = g.degrees[a].astype(np.float64)
    with np.errstate(divide="ignore"):
        ratio = np.where(degs > 0,
                         np.minimum(degs / size, size / np.maximum(degs, 1)),
                         0.0)
    alpha = min(td, float(ratio.min())) if size else 0.0
    return float(min(max(alpha, 0.0), 1.0))


def _family_sets(fam):
    if isinstance(fam, SetFamily):
        return fam.sets, fam.n
    raise TypeError("expected a SetFamily")


def _set_edge_densities(g: Graph, sets) -> np.ndarray:
    mark = np.zeros(g.n, dtype=np.int8)
    out = np.empty(len(sets), dtype=np.float64)
    for i, t in enumerate(sets):
        if t.size < 2:
            out[i] = 0.0
            continue
        e = _induced_edge_count(t, mark, g.indptr, g.indices)
        out[i] = 2.0 * e / (t.size * (t.size - 1))
    return out


def coverage(g: Graph, fam, gamma: float, min_size: int = 5) -> float:
    """Percentage of all vertices inside sets of size >= min_size with
    edge density >= gamma. Accepts a SetFamily or a plain list of vertex
    arrays; overlapping vertices count once."""
    if isinstance(fam, SetFamily):
        sets = fam.sets
    else:
        sets = [np.asarray(t, dtype=np.int32) for t in fam]
    if not 0 <= gamma <= 1:
        raise ValueError("gamma must be in [0, 1]")
    if g.n == 0:
        return 0.0
    eds = _set_edge_densities(g, sets)
    covered = np.zeros(g.n, dtype=bool)
    for t, ed in zip(sets, eds):
        if t.size >= min_size and ed >= gamma:
            covered[t] = True
    return 100.0 * np.count_nonzero(covered) / g.n


@dataclass(frozen=True)
class SetRecord:
    index: int  # extraction index within the family
    size: int
    edge_density: Optional[float]
    triangle_density: Optional[float]
    alpha: Optional[float]


@dataclass(frozen=True)
class FamilyReport:
    """Per-set records (size descending) plus the aggregate numbers."""

    n: int
    num_sets: int
    unassigned: int
    records: tuple
    coverage: tuple  # (gamma, min_size, percent)
    mean_edge_density_size10: Optional[float]
    largest: tuple  # up to 20 largest records

    def to_json(self) -> str:
        obj = {
            "n": self.n,
            "num_sets": self.num_sets,
            "unassigned": self.unassigned,
            "coverage": [
                {"gamma": gm, "min_size": ms, "coverage_pct": round(pct, 2)}
                for gm, ms, pct in self.coverage
            ],
            "mean_edge_density_size10":
                None if self.mean_edge_density_size10 is None
                else round(self.mean_edge_density_size10, 6),
            "largest_sets": [_record_obj(r) for r in self.largest],
            "sets": [_record_obj(r) for r in self.records],
        }
        return json.dumps(obj, indent=2) + "\n"

    def to_csv(self) -> str:
        lines = ["size,edge_density,triangle_density,alpha"]
        for r in self.records:
            lines.append(",".join([
                str(r.size),
                _csv_num(r.edge_density),
                _csv_num(r.triangle_density),
                _csv_num(r.alpha),
            ]))
        return "\n".join(lines) + "\n"


def _record_obj(r: SetRecord):
    rnd = lambda x: None if x is None else round(x, 6)
    return {"index": r.index, "size": r.size,
            "edge_density": rnd(r.edge_density),
            "triangle_density": rnd(r.triangle_density),
            "alpha": rnd(r.alpha)}


def _csv_num(x) -> str:
    return "" if x is None else f"{x:.6f}"


def family_report(g: Graph, fam: SetFamily, thresholds=(0.5, 0.8),
                  min_size: int = 5) -> FamilyReport:
    """Assemble the full report: per-set densities sorted by size
    descending, coverage at each threshold, mean edge density over sets of
    size >= 10 (absent when there are none), the 20 largest sets, and the
    unassigned count."""
    sets, n = _family_sets(fam)
    mark = np.zeros(g.n, dtype=np.int8)
    records = []
    for i, t in enumerate(sets):
        size = int(t.size)
        ed = td = al = None
        if size >= 2:
            e = _induced_edge_count(t, mark, g.indptr, g.indices)
            ed = 2.0 * e / (size * (size - 1))
        if size >= 3:
            tr = _induced_triangle_count(t, mark, g.indptr, g.indices)
            td = 6.0 * tr / (size * (size - 1) * (size - 2))
            degs = g.degrees[t].astype(np.float64)
            ratio = np.where(degs > 0,
                             np.minimum(degs / size, size / np.maximum(degs, 1)),
                             0.0)
            al = float(min(max(min(td, float(ratio.min())), 0.0), 1.0))
        records.append(SetRecord(i, size, ed, td, al))

    by_size = sorted(records, key=lambda r: (-r.size, r.index))
    cov = []
    for gm in thresholds:
        covered = np.zeros(g.n, dtype=bool)
        for r in records:
            if r.size >= min_size and (r.edge_density or 0.0) >= gm:
                covered[sets[r.index]] = True
        pct = 100.0 * np.count_nonzero(covered) / g.n if g.n else 0.0
        cov.append((float(gm), int(min_size), float(pct)))

    big = [r.edge_density for r in records
           if r.size >= 10 and r.edge_density is not None]
    mean10 = float(np.mean(big)) if big else None

    return FamilyReport(
        n=n,
        num_sets=len(sets),
        unassigned=fam.num_unassigned if isinstance(fam, SetFamily) else 0,
        records=tuple(by_size),
        coverage=tuple(cov),
        mean_edge_density_size10=mean10,
        largest=tuple(by_size[:20]),
    )
