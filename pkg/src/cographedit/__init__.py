"""Exact and heuristic cograph editing."""

__version__ = "0.1.0"

from .cotree import Cotree, build_cotree, cotree_to_graph, find_induced_p4, is_cograph
from .errors import (CographError, DimensionError, DomainError, NotCograph, NoValidFlip,
                     RetryLimitExceeded, SizeExceeded)
from .exact import ProblemVariant, solve_exact
from .graph import Graph, WeightMatrix, apply_edits, complement, distance
from .heuristic import VariantConfig, run_heuristic
from .simulate import perturb, simulate_cograph

__all__ = [
    "Cotree", "build_cotree", "cotree_to_graph", "find_induced_p4", "is_cograph",
    "CographError", "DimensionError", "DomainError", "NotCograph", "NoValidFlip",
    "RetryLimitExceeded", "SizeExceeded", "ProblemVariant", "solve_exact", "Graph",
    "WeightMatrix", "apply_edits", "complement", "distance", "VariantConfig",
    "run_heuristic", "perturb", "simulate_cograph",
]
