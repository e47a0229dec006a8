"""rtrx: extract disjoint families of dense, triangle-rich vertex sets.

The pipeline cleans a graph by deleting edges supported by too few
triangles, then repeatedly carves out a radius-2 set around a
minimum-degree seed until nothing is left, and finally grows the sets to
recover coverage. Comes with evaluation metrics and two baselines.
"""

from .baselines import (core_decomposition, core_groups, greedy_peel,
                        iterated_greedy)
from .extractor import (ExtractionParams, SetFamily, WorkingSubgraph, clean,
                        extract_one, run, two_hop_select)
from .graph import (EdgeListFormatError, Graph, from_edges, induced_edge_count,
                    load_edge_list, write_edge_list)
from .metrics import (FamilyReport, SetRecord, coverage, edge_density,
                      family_report, rtr_alpha, triangle_density)
from .postprocess import grow
from .triangles import (EdgeTriangleCounts, count_all_edge_triangles,
                        count_edge_triangle_array, triangles_of_edge)

__version__ = "0.1.0"

__all__ = [
    "Graph", "EdgeListFormatError", "load_edge_list", "from_edges",
    "induced_edge_count", "write_edge_list",
    "EdgeTriangleCounts", "count_all_edge_triangles",
    "count_edge_triangle_array", "triangles_of_edge",
    "ExtractionParams", "WorkingSubgraph", "SetFamily", "clean",
    "extract_one", "two_hop_select", "run",
    "grow",
    "edge_density", "triangle_density", "rtr_alpha", "coverage",
    "family_report", "FamilyReport", "SetRecord",
    "greedy_peel", "iterated_greedy", "core_decomposition", "core_groups",
    "__version__",
]
