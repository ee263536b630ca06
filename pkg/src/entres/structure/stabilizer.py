"""Stabilizers of entanglement structures and the product-splitting of shared-vertex maps."""
from fractions import Fraction

from ..hypergraph import Hypergraph
from ..tensor_core import Tensor, Matrix, flatten, right_inverse, inverse, matrix_rank
from .catalog import w_state
from .core import EntanglementStructure, LocalMapFamily, verify_restriction


def check_stabilizer(s, maps):
    maps = maps if isinstance(maps, LocalMapFamily) else LocalMapFamily(maps)
    for v, m in enumerate(maps):
        if not m.is_square():
            raise ValueError(f"stabilizer map at vertex {v} is not square ({m.rows}x{m.cols})")
    return verify_restriction(s, s, maps)


def epr_gauge(g: Matrix):
    """(g, g^{-T}) stabilizes sum_i |ii>."""
    return LocalMapFamily([g, inverse(g).T])


def double_w_structure():
    """Two W states on edges (0,1,2) and (0,1,3)."""
    return EntanglementStructure(Hypergraph(4, [(0, 1, 2), (0, 1, 3)]), [w_state(3), w_state(3)])


def g_shared(q):
    """1 + q |00><11| on the two-qubit space of a vertex shared by both W edges."""
    q = Fraction(q)
    data = {(i, i): Fraction(1) for i in range(4)}
    data[(0, 3)] = q
    return Matrix(4, 4, data)


def double_w_stabilizer(q):
    return LocalMapFamily([g_shared(q), g_shared(-Fraction(q)), Matrix.identity(2), Matrix.identity(2)])


class SplitFailure(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def split_shared_vertex_map(M: Matrix, phi1: Tensor, phi2: Tensor, out_dims, v1: int = 0, v2: int = 0):
    """Factor M on H_{e1,v} (x) H_{e2,v} as M1 (x) M2.

    phi1, phi2 are the (concise) edge states, with the shared vertex at party
    v1 resp. v2.  out_dims = (k1, k2) splits the output space.  Succeeds iff
    (M (x) 1)(phi1 (x) phi2) is a product across the two edges; then
    M = M1 (x) M2 exactly, M2's first nonzero entry is 1 and M1 carries the
    scalar.  Otherwise raises SplitFailure with a nonzero 2x2 minor as witness.
    """
    k1, k2 = (int(x) for x in out_dims)
    d1, d2 = phi1.dims[v1], phi2.dims[v2]
    if M.cols != d1 * d2:
        raise ValueError(f"M has {M.cols} columns, shared vertex dimension is {d1 * d2}")
    if M.rows != k1 * k2:
        raise ValueError(f"M has {M.rows} rows, out_dims give {k1 * k2}")
    F1 = flatten(phi1, {v1})
    F2 = flatten(phi2, {v2})
    if matrix_rank(F1) != d1 or matrix_rank(F2) != d2:
        raise ValueError("edge states must be concise at the shared vertex")
    F = F1.kron(F2)
    psi = M @ F  # rows (o1, o2), cols (r1, r2)
    r1, r2 = F1.cols, F2.cols
    # reshape to (o1, r1) x (o2, r2)
    data = {}
    for (row, col), x in psi.items():
        o1, o2 = divmod(row, k2)
        c1, c2 = divmod(col, r2)
        data[(o1 * r1 + c1, o2 * r2 + c2)] = x
    P = Matrix._raw(k1 * r1, k2 * r2, data)
    if P.nnz == 0:
        z1, z2 = Matrix.zeros(k1, d1), Matrix.zeros(k2, d2)
        return z1, z2
    # rank-1 test and factorization via a pivot entry
    (pi, pj), pv = min(P.items())
    rowvec = {j: x for (i, j), x in P.items() if i == pi}
    colvec = {i: x for (i, j), x in P.items() if j == pj}
    for (i, j), x in P.items():
        if x * pv != colvec.get(i, 0) * rowvec.get(j, 0):
            raise SplitFailure("image is not a product across the two edges",
                               witness={"rows": [pi, i], "cols": [pj, j],
                                        "minor": str(pv * x - rowvec.get(j, 0) * colvec.get(i, 0))})
    for i, a in colvec.items():
        for j, b in rowvec.items():
            if (i, j) not in P.entries and a * b != 0:
                raise SplitFailure("image is not a product across the two edges",
                                   witness={"rows": [pi, i], "cols": [pj, j], "minor": str(a * b)})
    # P = u v^T with u = colvec / pv, v = rowvec
    psi1 = Matrix(k1, r1, {divmod(i, r1): x / pv for i, x in colvec.items()})
    psi2 = Matrix(k2, r2, {divmod(j, r2): x for j, x in rowvec.items()})
    M1 = psi1 @ right_inverse(F1)
    M2 = psi2 @ right_inverse(F2)
    lead = min(M2.items())[1]
    M1, M2 = M1.scale(lead), M2.scale(1 / lead)
    if M1.kron(M2) != M:
        raise SplitFailure("reconstruction does not reproduce M")
    return M1, M2
