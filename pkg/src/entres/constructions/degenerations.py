"""Explicit degenerations: Bini, W, and the three-triangle GHZ_5 -> EPR construction."""
from ..hypergraph import Hypergraph
from ..tensor_core import EPS, PolyMatrix, Matrix, EpsPoly
from ..structure import ghz, bini, w_state, epr, PolyMapFamily, EntanglementStructure, uniform_structure
from .base import CatalogConstruction


def _qubits(s, coeff=1):
    """'01' -> {index: coeff} for a two-qubit basis vector."""
    return {int(s, 2): coeff}


def _vec(*parts):
    # parts: (bitstring, EpsPoly or scalar)
    out = {}
    for bits, c in parts:
        i = int(bits, 2)
        out[i] = out.get(i, 0) + EpsPoly.coerce(c)
    return out


# the five rank-one terms of the Bini degeneration, per party (A, B, C)
BINI_COLUMNS = [
    (_vec(("01", 1), ("11", EPS)), _vec(("10", 1)), _vec(("01", 1), ("00", EPS))),
    (_vec(("00", 1)), _vec(("00", 1), ("01", EPS)), _vec(("10", 1), ("00", EPS))),
    (_vec(("01", -1)), _vec(("00", 1), ("10", 1), ("11", EPS)), _vec(("01", 1))),
    (_vec(("00", -1), ("01", -1), ("10", -EPS)), _vec(("00", 1)), _vec(("10", 1))),
    (_vec(("01", 1), ("10", EPS)), _vec(("00", 1), ("11", EPS)), _vec(("01", 1), ("10", 1))),
]


def bini_maps():
    """Per-party 4x5 eps-matrices; column r is the r-th product term (signs on A)."""
    mats = []
    for party in range(3):
        data = {}
        for r, cols in enumerate(BINI_COLUMNS):
            for i, c in cols[party].items():
                data[(i, r)] = c
        mats.append(PolyMatrix(4, 5, data))
    return PolyMapFamily(mats)


def bini_degeneration():
    return CatalogConstruction(
        "bini", ghz(5, 3), bini(), bini_maps(), "degeneration",
        "Bini et al.: GHZ_5(3) degenerates to the Bini tensor with leading degree 1",
        expected={"d": 1})


def w_maps():
    """GHZ_2(3) -> W: branch 0 becomes (|0>+eps|1>)^3, branch 1 becomes -|000>."""
    m0 = PolyMatrix.from_rows([[1, -1], [EPS, 0]])
    m1 = PolyMatrix.from_rows([[1, 1], [EPS, 0]])
    return PolyMapFamily([m0, m1, m1])


def w_degeneration():
    return CatalogConstruction(
        "w", ghz(2, 3), w_state(3), w_maps(), "degeneration",
        "(|0>+eps|1>)^3 - |0>^3 = eps W + O(eps^2); border rank of W is 2",
        expected={"d": 1, "e": 2})


# -- GHZ_5 -> EPR on three triangles ------------------------------------------

A, B, C, D = range(4)
GHZ5_GRAPH = Hypergraph(4, [(A, B, D), (B, C, D), (C, A, D)])
# outer pairs AB, BC, CA (level 2), then AD (level 3), BD, CD (level 2)
GHZ5_TARGET_GRAPH = Hypergraph(4, [(A, B), (B, C), (C, A), (A, D), (B, D), (C, D)])


def ghz5_source():
    return uniform_structure(GHZ5_GRAPH, ghz(5, 3))


def ghz5_target():
    return EntanglementStructure(GHZ5_TARGET_GRAPH, [epr(2), epr(2), epr(2), epr(3), epr(2), epr(2)])


def _bits(x, n):
    return [(x >> (n - 1 - i)) & 1 for i in range(n)]


def _f3(a, b):
    # |0><00| + |1><01| + |2><10|
    return {(0, 0): 0, (0, 1): 1, (1, 0): 2}.get((a, b))


def _f2(a, b):
    # |0><00| + |1>(<01| + <10|)
    return {(0, 0): 0, (0, 1): 1, (1, 0): 1}.get((a, b))


def _bit_matrix(nbits, fn, out_dims):
    """0/1 matrix sending basis |bits> to |fn(bits)> (fn returns a digit tuple or None)."""
    data = {}
    for x in range(1 << nbits):
        out = fn(_bits(x, nbits))
        if out is None:
            continue
        row = 0
        for digit, d in zip(out, out_dims):
            row = row * d + digit
        data[(row, x)] = 1
    rows = 1
    for d in out_dims:
        rows *= d
    return Matrix(rows, 1 << nbits, data)


def _outer_a(b):
    # A slots: T_AB as beta-A (z_A, x_AB), T_CA as beta-B (x_CA, y_A)
    z, x_ab, x_ca, y = b
    v = _f3(y, z)
    return None if v is None else (x_ab, x_ca, v)


def _outer_b(b):
    # B slots: T_AB as beta-B (x_AB, y_B), T_BC as beta-A (z_B, x_BC)
    x_ab, y, z, x_bc = b
    v = _f2(y, z)
    return None if v is None else (x_ab, x_bc, v)


def _outer_c(b):
    # C slots: T_BC as beta-B (x_BC, y_C), T_CA as beta-A (z_C, x_CA)
    x_bc, y, z, x_ca = b
    v = _f2(y, z)
    return None if v is None else (x_bc, x_ca, v)


def _inner_d(b):
    # D slots: beta-C of T_AB (y_B, z_A), T_BC (y_C, z_B), T_CA (y_A, z_C)
    y_b, z_a, y_c, z_b, y_a, z_c = b
    a1, a2, b1, b2, c1, c2 = y_a, z_a, y_b, z_b, y_c, z_c
    kept = (a1 == 0 and b1 == 0 and c1 == 0) or ((a1, a2) == (1, 0) and b2 == 0 and c2 == 0)
    if not kept:
        return None
    return (_f3(a1, a2), _f2(b1, b2), _f2(c1, c2))


def interior_projector_support():
    """The 12 kept patterns of D as (A', B', C') bit pairs."""
    out = []
    for a in range(4):
        for b in range(4):
            for c in range(4):
                a1, a2, b1, b2, c1, c2 = _bits(a, 2) + _bits(b, 2) + _bits(c, 2)
                if (a1 == b1 == c1 == 0) or ((a1, a2) == (1, 0) and b2 == 0 and c2 == 0):
                    out.append(((a1, a2), (b1, b2), (c1, c2)))
    return out


def ghz5_maps():
    """Final maps composed after the three Bini role maps, one composite per vertex."""
    bm = bini_maps().maps
    ba, bb, bc = bm
    w = [_bit_matrix(4, _outer_a, (2, 2, 3)),
         _bit_matrix(4, _outer_b, (2, 2, 2)),
         _bit_matrix(4, _outer_c, (2, 2, 2)),
         _bit_matrix(6, _inner_d, (3, 2, 2))]
    # slot order follows edge order at each vertex
    roles = [ba.kron(bb),          # A: edge 0 as beta-A, edge 2 as beta-B
             bb.kron(ba),          # B: edge 0 as beta-B, edge 1 as beta-A
             bb.kron(ba),          # C: edge 1 as beta-B, edge 2 as beta-A
             bc.kron(bc).kron(bc)]
    return PolyMapFamily([PolyMatrix.from_matrix(wv) @ rv for wv, rv in zip(w, roles)])


def ghz5_to_epr():
    return CatalogConstruction(
        "ghz5_to_epr", ghz5_source(), ghz5_target(), ghz5_maps(), "degeneration",
        "three Bini degenerations, interior projector onto 12 patterns, merging maps on A, B, C and D",
        expected={"d": 3},
        notes="target: level-2 EPR pairs AB, BC, CA, BD, CD and a level-3 pair AD")


def ghz5_edgewise_obstruction():
    """GHZ_5 on one triangle cannot degenerate to EPR_3 (x) EPR_2 meeting at one vertex.

    Returns (source flattening rank 5, target rank 6) across the shared vertex.
    """
    from ..tensor_core import flatten, matrix_rank
    from ..structure import materialize
    target = EntanglementStructure(Hypergraph(3, [(0, 1), (1, 2)]), [epr(3), epr(2)])
    t = materialize(target)
    src = ghz(5, 3)
    return matrix_rank(flatten(src, {1})), matrix_rank(flatten(t, {1}))
