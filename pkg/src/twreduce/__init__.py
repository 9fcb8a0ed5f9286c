"""Treewidth dynamic programming for connectivity problems with rank-based table reduction."""

from .decomposition import heuristic_decompose, nicify, parse_td
from .graph import Graph, SteinerInstance, parse_gr, parse_terminals
from .hamilton import solve_hamilton
from .kernels import BACKEND
from .policy import ReducePolicy, RunStats
from .reduce import reduce, reduce_matchings
from .steiner import solve_steiner

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Graph", "ReducePolicy", "RunStats", "SteinerInstance", "heuristic_decompose",
    "nicify", "parse_gr", "parse_td", "parse_terminals", "reduce", "reduce_matchings",
    "solve_hamilton", "solve_steiner",
]
