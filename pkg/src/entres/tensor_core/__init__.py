"""Exact sparse multiparty tensors and the multilinear primitives built on them."""
from .rational import to_rational, format_rational
from .tensor import Tensor, tensor_product, kron, kron_power, direct_sum
from .matrix import (Matrix, kron_all, matrix_rank, rank_mod_p, rref, inverse, right_inverse,
                     determinant, nullspace)
from .poly import EpsPoly, EPS, PolyMatrix, PolyTensor, poly_kron_all
from .multilinear import (flatten, apply_local_maps, poly_apply, poly_apply_and_leading,
                          NullDegenerationError)
from .numeric import reduced_entropy, hyperdeterminant_222, als_rank_fit, gram_matrix

__all__ = [
    "to_rational", "format_rational", "Tensor", "tensor_product", "kron", "kron_power",
    "direct_sum", "Matrix", "kron_all", "matrix_rank", "rank_mod_p", "rref", "inverse",
    "right_inverse", "determinant", "nullspace", "EpsPoly", "EPS", "PolyMatrix", "PolyTensor",
    "poly_kron_all", "flatten", "apply_local_maps", "poly_apply", "poly_apply_and_leading",
    "NullDegenerationError", "reduced_entropy", "hyperdeterminant_222", "als_rank_fit",
    "gram_matrix",
]
