"""Exact Ising partition functions on small graphs and numerical checks of
Lee-Yang type non-vanishing results."""

from .graph import Graph, GraphError, connected_components, delete_vertex, generate, parse_edge_list, read_graph
from .ising import (
    ActivityAssignment,
    CapExceededError,
    EvalResult,
    ZeroPartitionError,
    cut_size,
    evaluate,
    evaluate_DZ,
    evaluate_naive,
    evaluate_Z,
    magnetization,
    plus_spectrum,
)
from .roots import Polynomial, RestrictionPolynomial, RootSet, find_roots
from .decomposition import Decomposition, decompose, rescaled_activities, verify_A_nonzero
from .probe import ProbeRecord, directional_zero, proof_probe, taylor_check

__version__ = "0.1.0"
