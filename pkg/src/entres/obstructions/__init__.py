"""Bounds that rule transformations out: flattenings, Koszul flattenings, substitution slices,
quantum functionals, and the aggregated rank bounds."""
from .flattening import (BoundReport, flattening_lower_bound, structure_flattening_rank, checkerboard_side,
                         restriction_flattening_check, stripe_bound, BIPARTITION_CAP)
from .koszul import (FlatteningSpec, KoszulFlattening, identity_spec, koszul_spec, koszul_flattening,
                     generalized_flattening, koszul_bound, best_koszul_bound, multiflattening_bound,
                     lattice_koszul_battery, min_root, random_projection, epr_triangle_koszul_closed_form)
from .substitution import (slice, slice_rank, slice_matrix, rank_drop_probe, span_dimension, w_slice,
                           lambda_slice_matrix, lambda_slice_expected, psi_state, phi_state, matrix_of_vector,
                           four_vector_family)
from .functionals import (LogLinear, entropic_functional, functional_catalog_value,
                          asymptotic_obstruction_check)
from .rank_bounds import RankBounds, rank_bounds, EFFORTS

__all__ = [n for n in dir() if not n.startswith("_")]
