"""Explicit restrictions: Strassen's decomposition and the global-GHZ extraction."""
from itertools import product

from ..hypergraph import plaquette_square_lattice, square_lattice
from ..tensor_core import Matrix
from ..structure import (ghz, epr, epr_triangle, global_ghz_plaquette, LocalMapFamily, EntanglementStructure,
                         uniform_structure, MaterializationError, MATERIALIZE_CAP)
from ..structure.catalog import PLAQUETTE_CORNERS, PLAQUETTE_SIDES
from .base import CatalogConstruction

# Strassen products: (X coefficients, Y coefficients) with X_ik, Y_kj given as "ik" / "kj"
STRASSEN_PRODUCTS = [
    ({"11": 1, "22": 1}, {"11": 1, "22": 1}),
    ({"21": 1, "22": 1}, {"11": 1}),
    ({"11": 1}, {"12": 1, "22": -1}),
    ({"22": 1}, {"21": 1, "11": -1}),
    ({"11": 1, "12": 1}, {"22": 1}),
    ({"21": 1, "11": -1}, {"11": 1, "12": 1}),
    ({"12": 1, "22": -1}, {"21": 1, "22": 1}),
]
# C_ij = sum_r coefficient * M_r
STRASSEN_OUTPUT = {
    "11": {0: 1, 3: 1, 4: -1, 6: 1},
    "12": {2: 1, 4: 1},
    "21": {1: 1, 3: 1},
    "22": {0: 1, 1: -1, 2: 1, 5: 1},
}


def strassen_maps():
    """X_ik -> A index 2i+k, Y_kj -> B index 2j+k, C_ij -> C index 2i+j (0-based)."""
    a, b, c = {}, {}, {}
    for r, (xs, ys) in enumerate(STRASSEN_PRODUCTS):
        for ik, v in xs.items():
            i, k = int(ik[0]) - 1, int(ik[1]) - 1
            a[(2 * i + k, r)] = v
        for kj, v in ys.items():
            k, j = int(kj[0]) - 1, int(kj[1]) - 1
            b[(2 * j + k, r)] = v
    for ij, coeffs in STRASSEN_OUTPUT.items():
        i, j = int(ij[0]) - 1, int(ij[1]) - 1
        for r, v in coeffs.items():
            c[(2 * i + j, r)] = v
    return LocalMapFamily([Matrix(4, 7, a), Matrix(4, 7, b), Matrix(4, 7, c)])


def strassen_decomposition():
    return CatalogConstruction(
        "strassen", ghz(7, 3), epr_triangle(2), strassen_maps(), "restriction",
        "Strassen: 2x2 matrix multiplication with 7 products, GHZ_7(3) >= EPR_2 triangle")


# -- global GHZ extraction ---------------------------------------------------

def _lattice_edge_ids(rows, cols):
    """(vertex, 'h'|'v') -> edge index in square_lattice(rows, cols, periodic=True)."""
    ids = {}
    n = 0
    for v in range(rows * cols):
        ids[(v, "h")] = n
        ids[(v, "v")] = n + 1
        n += 2
    return ids


def _side_edges(cell_vertices, ids):
    bl, tl, tr, br = cell_vertices
    return {"AB": ids[(tl, "v")], "BC": ids[(tl, "h")], "CD": ids[(tr, "v")], "DA": ids[(bl, "h")]}


def global_ghz_structures(n_level, rows, cols):
    src = uniform_structure(plaquette_square_lattice(rows, cols, periodic=True), global_ghz_plaquette(n_level))
    lat = square_lattice(rows, cols, periodic=True)
    V = rows * cols
    dst = EntanglementStructure(lat, [epr(n_level)] * lat.edge_count).with_edge(tuple(range(V)), ghz(4, V))
    return src, dst


def global_ghz_maps(n_level, rows, cols, src=None, dst=None):
    """Per vertex: P = P_1 + ... + P_4 followed by relabelling onto the lattice bonds and |k>.

    A source pattern at a vertex is kept iff every plaquette around it uses
    the same corner k; the slot values then give the four bond values.
    """
    if src is None:
        src, dst = global_ghz_structures(n_level, rows, cols)
    ids = _lattice_edge_ids(rows, cols)
    d = n_level + 1
    side_of = {}
    for name, ends in PLAQUETTE_SIDES.items():
        for role_slot in ends:
            side_of[role_slot] = name
    maps = []
    for v in range(src.vertex_count):
        slots = src.slots(v)  # (plaquette, role, dim) with two (n+1)-level factors each
        sides = [_side_edges(src.graph.edges[p], ids) for p, _, _ in slots]
        out_slots = dst.slots(v)
        out_pos = {n: i for i, (n, _, _) in enumerate(out_slots)}
        out_dims = [k for _, _, k in out_slots]
        expected = []
        for corner in PLAQUETTE_CORNERS:
            act = set()
            for side in corner:
                act.update(PLAQUETTE_SIDES[side])
            expected.append([tuple((role, s) in act for s in range(2)) for _, role, _ in slots])
        data = {}
        for digits in product(range(d), repeat=2 * len(slots)):
            pattern = [(digits[2 * q] > 0, digits[2 * q + 1] > 0) for q in range(len(slots))]
            k = next((c for c, e in enumerate(expected) if e == pattern), None)
            if k is None:
                continue
            out = [None] * len(out_slots)
            for q, (_, role, _) in enumerate(slots):
                for s in range(2):
                    val = digits[2 * q + s]
                    if val:
                        e = sides[q][side_of[(role, s)]]
                        pos = out_pos[e]
                        if out[pos] is not None:
                            raise AssertionError("bond assigned twice")
                        out[pos] = val - 1
            out[-1] = k
            if any(x is None for x in out):
                raise AssertionError("bond left unassigned")
            row = 0
            for x, dim in zip(out, out_dims):
                row = row * dim + x
            col = 0
            for x in digits:
                col = col * d + x
            data[(row, col)] = 1
        rows_v = 1
        for k in out_dims:
            rows_v *= k
        maps.append(Matrix(rows_v, d ** (2 * len(slots)), data))
    return LocalMapFamily(maps)


def global_ghz_extraction(n_level=2, rows=2, cols=2, cap=MATERIALIZE_CAP):
    src, dst = global_ghz_structures(n_level, rows, cols)
    if src.estimated_terms() > cap:
        raise MaterializationError(f"structure too large to materialize: {src.estimated_terms()} terms exceed the cap of {cap}")
    maps = global_ghz_maps(n_level, rows, cols, src, dst)
    return CatalogConstruction(
        f"global_ghz_n{n_level}_{rows}x{cols}", src, dst, maps, "restriction",
        "plaquette corner states on the periodic square lattice >= level-n EPR lattice (x) GHZ_4(|V|)",
        notes=f"source terms {src.estimated_terms()}, target terms {dst.estimated_terms()}")


def ghz_to_epr_square(D=2):
    """GHZ_{D^4}(4) >= EPR_D on the 4-cycle: GHZ index = bond values (i0, i1, i2, i3).

    Vertex v keeps the digits of its two incident bonds, in the edge order of
    the ring (0,1), (1,2), (2,3), (3,0).
    """
    from ..structure import epr_square
    ring = [(0, 1), (1, 2), (2, 3), (3, 0)]
    r = D ** 4
    maps = []
    for v in range(4):
        inc = [n for n, e in enumerate(ring) if v in e]
        data = {}
        for t in range(r):
            digits = [(t // D ** (3 - q)) % D for q in range(4)]
            data[(digits[inc[0]] * D + digits[inc[1]], t)] = 1
        maps.append(Matrix(D * D, r, data))
    return CatalogConstruction(
        f"ghz_to_epr_square_D{D}", ghz(r, 4), epr_square(D), LocalMapFamily(maps), "restriction",
        "one GHZ level per joint bond value: each vertex keeps its two bond digits",
        notes="meets the checkerboard flattening bound r >= D^4 with equality")
