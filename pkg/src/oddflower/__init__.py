"""Flower-free extremal graphs, flower detection, and edge decompositions."""

__version__ = "0.1.0"

from .errors import (BudgetExhausted, CapRefusal, InputError, ParseError, PreconditionError,
                     StitchingError)
from .graph import (CutState, Graph, best_local_cut, complete_graph, graph6_decode, graph6_encode,
                    local_max_cut, matching_number, maximum_matching, parse_graph)
from .flower import (FlowerEmbedding, FlowerSpec, contains_flower, find_flower_centered,
                     flower_potential, parse_spec, standalone_flower, verify_embedding)
from .extremal import build_family_member, build_theorem1_extremal, ex_formula, turan_graph
from .decompose import DecompositionResult, decompose, peel_min_degree
from .oracle import EnumerationStream, enumerate_graphs, ex_bruteforce, max_packing

__all__ = [
    "BudgetExhausted", "CapRefusal", "InputError", "ParseError", "PreconditionError", "StitchingError",
    "CutState", "Graph", "best_local_cut", "complete_graph", "graph6_decode", "graph6_encode",
    "local_max_cut", "matching_number", "maximum_matching", "parse_graph",
    "FlowerEmbedding", "FlowerSpec", "contains_flower", "find_flower_centered", "flower_potential",
    "parse_spec", "standalone_flower", "verify_embedding",
    "build_family_member", "build_theorem1_extremal", "ex_formula", "turan_graph",
    "DecompositionResult", "decompose", "peel_min_degree",
    "EnumerationStream", "enumerate_graphs", "ex_bruteforce", "max_packing",
]
