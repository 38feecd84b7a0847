"""Edge interdiction for treewidth and bounded component size, with the
noisy-planar MIS and MAX-SAT solvers built on top."""

__version__ = "0.1.0"

from .graph import Graph, Subgraph, connected_components, boundary_subgraph, build_factor_graph
from .cnf import CnfFormula
