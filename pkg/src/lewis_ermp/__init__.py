"""Lewis weights as an approximation to Kirchhoff-index minimization on graphs."""

from .bounds import BoundsReport, alpha1, alpha2, bounds_report
from .graph import Graph, GraphError, build_graph, generate, read_edge_list
from .laplacian import LaplacianSystem
from .lewis import LewisNonConvergence, LewisResult, lewis_weights
from .oracle import ErmpSolution, duality_gap, ermp_solve
from .stt import ThinTreeReport, lw_thin_tree, thinness
from .trees import TreeInstance, is_bowtie, polarize, tree_alpha, tree_optimal

__all__ = [
    "BoundsReport",
    "ErmpSolution",
    "Graph",
    "GraphError",
    "LaplacianSystem",
    "LewisNonConvergence",
    "LewisResult",
    "ThinTreeReport",
    "TreeInstance",
    "alpha1",
    "alpha2",
    "bounds_report",
    "build_graph",
    "duality_gap",
    "ermp_solve",
    "generate",
    "is_bowtie",
    "lewis_weights",
    "lw_thin_tree",
    "polarize",
    "read_edge_list",
    "thinness",
    "tree_alpha",
    "tree_optimal",
]
