"""Tensor-network coefficients by exact sparse contraction, and the matchings reduction."""
from .core import CovectorAssignment, ContractionPlan, contract, contract_oracle, greedy_order, naive_plan
from .matchings import (matchings_partition_brute, matchings_vertex_tensors, detect_grid, vertex_roles,
                        MATCHING_EDGE_CAP)

__all__ = [n for n in dir() if not n.startswith("_")]
