"""Entanglement structures: catalog states, verification, folding, interpolation, stabilizers."""
from .catalog import (catalog_state, catalog_names, ghz, epr, epr_triangle, w_state, lambda_state, bini,
                      epr_square, global_ghz_plaquette, product_state)
from .core import (EntanglementStructure, LocalMapFamily, PolyMapFamily, VerificationResult,
                   MaterializationError, MATERIALIZE_CAP, as_structure, uniform_structure, materialize,
                   verify_restriction, verify_degeneration, is_concise, fold_structure,
                   push_maps_through_folding, merge_parallel_edges, slot_permutation_matrix, tensor_diff)
from .interpolation import interpolate_degeneration, interpolation_source, lagrange_weights_at_zero
from .stabilizer import (check_stabilizer, split_shared_vertex_map, SplitFailure, epr_gauge,
                         double_w_structure, double_w_stabilizer, g_shared)
from .io import (structure_to_json, structure_from_json, maps_to_json, maps_from_json, matrix_to_json,
                 matrix_from_json, tensor_from_doc, FormatError, load_json, dump_json)

__all__ = [n for n in dir() if not n.startswith("_")]
