"""Conversion-bound calculators and the table of literature rank values."""
import math
import re

from ..hypergraph import Hypergraph
from ..structure import w_state, uniform_structure


def border_subrank_epr(D: int) -> int:
    """ceil(3 D^2 / 4), the border subrank of the level-D EPR triangle (value only)."""
    D = int(D)
    if D < 1:
        raise ValueError("D must be at least 1")
    return -(-3 * D * D // 4)


def sublattice_conversion_bound(n_level: int, D: int, border_rank_of_eprD: int):
    """r = n * (border rank of EPR_D triangle); feasible iff n >= ceil(3D^2/4).

    The border rank is a caller-supplied parameter (not baked in).
    """
    n_level, D, br = int(n_level), int(D), int(border_rank_of_eprD)
    if n_level < 1 or br < 1:
        raise ValueError("n_level and the border rank must be positive")
    need = border_subrank_epr(D)
    return {"r": n_level * br, "feasible": n_level >= need, "threshold": need}


def tetrahedron_conversion_bound(D: int):
    """(single plaquette r, lattice r) = (ceil(3D^2/4), floor(sqrt(ceil(3D^4/4))))."""
    D = int(D)
    if D < 1:
        raise ValueError("D must be at least 1")
    single = border_subrank_epr(D)
    lattice = math.isqrt(-(-3 * D ** 4 // 4))
    return single, lattice


# two W states on the four hypergraphs with two 3-edges
W_PAIR_GRAPHS = {
    "G6": Hypergraph(6, [(0, 1, 2), (3, 4, 5)]),   # disjoint
    "G5": Hypergraph(5, [(0, 1, 2), (2, 3, 4)]),   # one shared vertex
    "G4": Hypergraph(4, [(0, 1, 2), (0, 1, 3)]),   # two shared vertices
    "G3": Hypergraph(3, [(0, 1, 2), (0, 1, 2)]),   # Kronecker product
}
# vertex maps realising the folding chain G6 -> G5 -> G4 -> G3
W_PAIR_FOLDS = {
    ("G6", "G5"): (0, 1, 2, 2, 3, 4),
    ("G5", "G4"): (1, 2, 0, 1, 3),
    ("G4", "G3"): (0, 1, 2, 2),
}


def w_pair_structure(name):
    return uniform_structure(W_PAIR_GRAPHS[name], w_state(3))


KNOWN_RANKS = {
    "w_g6": (8, "rank of W on two disjoint 3-edges (G6) [known value]"),
    "w_g5": (8, "rank of W on two 3-edges sharing one vertex (G5) [known value]"),
    "w_g4": (8, "rank of W on two 3-edges sharing two vertices (G4) [known value]"),
    "w_g3": (7, "rank of the Kronecker square of W (G3) [known value]"),
    "epr2_triangle": (7, "rank of the level-2 EPR triangle, Strassen [known value]"),
    "w": (3, "rank of W [known value]"),
    "w_border": (2, "border rank of W [known value]"),
}

_ALIASES = {
    "g6": "w_g6", "g5": "w_g5", "g4": "w_g4", "g3": "w_g3",
    "w_on_g6": "w_g6", "w_on_g5": "w_g5", "w_on_g4": "w_g4", "w_on_g3": "w_g3",
    "w_kron_w": "w_g3", "wkronw": "w_g3", "w_otimes_w": "w_g6",
    "epr_2_triangle": "epr2_triangle", "epr_triangle_2": "epr2_triangle", "matmul_2": "epr2_triangle",
    "w3": "w", "w_3": "w", "w_border_rank": "w_border", "border_w": "w_border",
}


def _norm(q):
    return re.sub(r"[\s\-]+", "_", str(q).strip().lower())


def known_rank_table(query=None):
    """All entries (query None) or the single entry for query: {key, value, provenance}."""
    if query is None:
        return [{"key": k, "value": v, "provenance": p} for k, (v, p) in KNOWN_RANKS.items()]
    key = _norm(query)
    key = _ALIASES.get(key, key)
    if key not in KNOWN_RANKS:
        raise KeyError(f"unknown rank-table query {query!r}; known: {', '.join(KNOWN_RANKS)}")
    v, p = KNOWN_RANKS[key]
    return {"key": key, "value": v, "provenance": p}
