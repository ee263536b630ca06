"""Weighted matchings on the square lattice as a bond-dimension-2 contraction, with a brute-force
oracle.  Edge variables are carried by the vertex to the right of or below the edge."""
from fractions import Fraction

from ..hypergraph import Hypergraph, square_lattice, square_lattice_directions
from ..tensor_core import to_rational
from ..structure import EntanglementStructure, epr
from .core import CovectorAssignment

MATCHING_EDGE_CAP = 24


def _weights(G, x):
    x = [to_rational(c) for c in x]
    if len(x) != G.edge_count:
        raise ValueError(f"{len(x)} edge weights for {G.edge_count} edges")
    return x


def matchings_partition_brute(G: Hypergraph, x) -> Fraction:
    """Z(x) = sum over matchings M (including the empty one) of prod_{e in M} x(e)."""
    if not G.is_uniform(2):
        raise ValueError("matchings need a 2-uniform hypergraph")
    if G.edge_count > MATCHING_EDGE_CAP:
        raise ValueError(f"{G.edge_count} edges exceed the enumeration cap of {MATCHING_EDGE_CAP}")
    x = _weights(G, x)
    edges = G.edges

    def go(i, used):
        if i == len(edges):
            return Fraction(1)
        total = go(i + 1, used)
        u, w = edges[i]
        if x[i] and u not in used and w not in used:
            total += x[i] * go(i + 1, used | {u, w})
        return total
    return go(0, frozenset())


def detect_grid(G: Hypergraph):
    """(rows, cols) if G is the open square lattice from the generator, else None."""
    V = G.vertex_count
    for n in range(2, V + 1):
        if V % n == 0 and V // n >= 2 and square_lattice(n, V // n) == G:
            return n, V // n
    return None


def matchings_vertex_tensors(G: Hypergraph, x):
    """EPR_2 on every lattice edge and one covector per vertex with the five terms
    (all 0), x_left <1|_left, x_top <1|_top, <1|_right, <1|_down; absent edges are dropped."""
    grid = detect_grid(G)
    if grid is None:
        raise ValueError("unsupported graph: expected an open square lattice from square_lattice(n, m)")
    n, m = grid
    x = _weights(G, x)
    dirs = square_lattice_directions(n, m)
    s = EntanglementStructure(G, [epr(2)] * G.edge_count)
    vecs = []
    for v in range(G.vertex_count):
        slots = s.slots(v)
        k = len(slots)
        vec = [Fraction(0)] * (2 ** k)
        vec[0] = Fraction(1)
        for pos, (e, j, _) in enumerate(slots):
            # j = 1: v is the right/lower end, so this bond is v's left or top edge
            weight = x[e] if j == 1 else Fraction(1)
            vec[1 << (k - 1 - pos)] += weight
        vecs.append(vec)
    return s, CovectorAssignment(vecs)


def vertex_roles(G: Hypergraph):
    """Per vertex: the role ('left', 'top', 'right', 'down') of each slot, in slot order."""
    grid = detect_grid(G)
    if grid is None:
        raise ValueError("unsupported graph")
    dirs = square_lattice_directions(*grid)
    out = []
    for v in range(G.vertex_count):
        roles = []
        for e, j in G.incidences(v):
            h = dirs[e] == "h"
            roles.append(("left" if h else "top") if j == 1 else ("right" if h else "down"))
        out.append(roles)
    return out
