"""Bipartition flattening bounds for tensors and (unmaterialized) structures."""
from fractions import Fraction
import math

from ..hypergraph import Folding, all_bipartition_foldings, Hypergraph
from ..tensor_core import Tensor, flatten, matrix_rank
from ..structure.core import EntanglementStructure

BIPARTITION_CAP = 1 << 15


class BoundReport:
    """A lower bound with its witness.  ``value`` is exact; ``bound`` is its ceiling."""

    def __init__(self, value, witness=None, factors=(), provenance="", certified=True, kind="lower"):
        self.value = Fraction(value)
        self.witness = witness
        self.factors = list(factors)
        self.provenance = provenance
        self.certified = certified
        self.kind = kind

    @property
    def bound(self):
        return math.ceil(self.value)

    def __repr__(self):
        return f"BoundReport(bound={self.bound}, value={self.value}, witness={self.witness})"

    def to_json(self):
        def enc(x):
            if isinstance(x, Fraction):
                return str(x)
            if isinstance(x, (set, frozenset, tuple)):
                return [enc(y) for y in sorted(x)] if isinstance(x, (set, frozenset)) else [enc(y) for y in x]
            if isinstance(x, list):
                return [enc(y) for y in x]
            if isinstance(x, dict):
                return {str(k): enc(v) for k, v in x.items()}
            return x
        return {"bound": self.bound, "value": str(self.value), "witness": enc(self.witness),
                "factors": enc(self.factors), "provenance": self.provenance, "certified": self.certified,
                "kind": self.kind}


def _sides(bipartitions, n):
    """Normalize to a list of frozensets (side 1); None -> all, binary order, capped."""
    out = []
    for b in bipartitions:
        if isinstance(b, Folding):
            out.append(frozenset(v for v, x in enumerate(b.vertex_map) if x == 1))
        else:
            out.append(frozenset(int(v) for v in b))
    for s in out:
        if not s or len(s) == n or any(not 0 <= v < n for v in s):
            raise ValueError(f"bipartition side {sorted(s)} is not a nonempty proper subset")
    return out


def _all_sides(n, cap):
    g = Hypergraph(n, [])
    return [frozenset(v for v, x in enumerate(f.vertex_map) if x == 1) for f in all_bipartition_foldings(g, cap)]


def structure_flattening_rank(s: EntanglementStructure, side, cache=None):
    """Rank across (side, complement): product of per-edge ranks, no materialization."""
    side = frozenset(side)
    r = 1
    factors = []
    for n, (e, t) in enumerate(zip(s.graph.edges, s.edge_states)):
        left = frozenset(j for j, u in enumerate(e) if u in side)
        if not left or len(left) == len(e):
            continue
        key = (n, left)
        if cache is not None and key in cache:
            k = cache[key]
        else:
            k = matrix_rank(flatten(t, left))
            if cache is not None:
                cache[key] = k
        r *= k
        factors.append((n, k))
    return r, factors


def flattening_lower_bound(t, bipartitions=None, cap: int = BIPARTITION_CAP) -> BoundReport:
    """Max flattening rank over the given bipartitions (vertex sets or 2-vertex foldings)."""
    if isinstance(t, Tensor):
        if t.is_zero():
            raise ValueError("flattening bound of the zero tensor")
        n = t.party_count
        sides = _all_sides(n, cap) if bipartitions is None else _sides(bipartitions, n)
        best, wit = 0, None
        for s in sides:
            k = matrix_rank(flatten(t, s))
            if k > best:
                best, wit = k, s
        return BoundReport(best, witness=sorted(wit) if wit else None,
                           provenance="max bipartition flattening rank (lower bound on border rank)")
    if not isinstance(t, EntanglementStructure):
        raise TypeError("expected a Tensor or an EntanglementStructure")
    n = t.graph.vertex_count
    sides = _all_sides(n, cap) if bipartitions is None else _sides(bipartitions, n)
    cache = {}
    best, wit, fac = 0, None, []
    for s in sides:
        k, f = structure_flattening_rank(t, s, cache)
        if k > best:
            best, wit, fac = k, s, f
    return BoundReport(best, witness=sorted(wit) if wit else None, factors=fac,
                       provenance="max bipartition flattening rank, product over crossing edges")


def checkerboard_side(rows, cols):
    """Vertices (r, c) with r + c odd; on the periodic plaquette lattice with even sizes every
    plaquette is cut 2|2 across its diagonals, so all four boundary pairs cross."""
    if rows % 2 or cols % 2:
        raise ValueError("the checkerboard cut needs even lattice sizes")
    return frozenset(r * cols + c for r in range(rows) for c in range(cols) if (r + c) % 2)


def restriction_flattening_check(src, dst, bipartitions=None, cap: int = BIPARTITION_CAP):
    """First bipartition where rank(dst) > rank(src) (restriction impossible), or None."""
    def rank(x, s, cache):
        if isinstance(x, Tensor):
            return matrix_rank(flatten(x, s))
        return structure_flattening_rank(x, s, cache)[0]
    n = src.party_count if isinstance(src, Tensor) else src.graph.vertex_count
    sides = _all_sides(n, cap) if bipartitions is None else _sides(bipartitions, n)
    ca, cb = {}, {}
    for s in sides:
        a, b = rank(src, s, ca), rank(dst, s, cb)
        if b > a:
            return {"side": sorted(s), "source_rank": a, "target_rank": b}
    return None


def stripe_bound(D: int, r: int = None, rows: int = 2, cols: int = 2):
    """GHZ_r(4) on every plaquette vs EPR_D squares, across the checkerboard cut.

    Plaquette (bl, tl, tr, br) is cut {tl, br} | {bl, tr}; its four ring bonds
    all cross, so the ranks are r^|E| (source) and D^(4|E|) (target) and a
    restriction needs r >= D^4.
    """
    from ..hypergraph import plaquette_square_lattice
    from ..structure import ghz, epr_square, uniform_structure
    g = plaquette_square_lattice(rows, cols, periodic=True)
    side = checkerboard_side(rows, cols)
    dst = uniform_structure(g, epr_square(D))
    dst_rank, fac = structure_flattening_rank(dst, side)
    E = g.edge_count
    per = {k for _, k in fac}
    if len(fac) != E or per != {D ** 4}:
        raise AssertionError("checkerboard cut did not give rank D^4 on every plaquette")
    need = D ** 4
    rep = BoundReport(need, witness={"side": sorted(side), "plaquettes": E, "target_rank": dst_rank,
                                     "per_plaquette": D ** 4},
                      factors=fac, provenance=f"checkerboard bipartition of the periodic {rows}x{cols} plaquette lattice")
    if r is not None:
        src = uniform_structure(g, ghz(r, 4))
        src_rank, _ = structure_flattening_rank(src, side)
        rep.witness.update({"r": r, "source_rank": src_rank, "obstructed": src_rank < dst_rank,
                            "tight": src_rank == dst_rank})
    return rep
