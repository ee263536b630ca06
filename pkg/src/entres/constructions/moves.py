"""Moving EPR pairs between plaquettes: regrouping and one-hop teleportation.

A PlaquetteAssembly is an entanglement structure whose edge states are
products of smaller factors.  Each factor lives on a subset of its
plaquette's vertices; moving a factor to another plaquette that contains the
same vertices only permutes Hilbert-space slots, so it is an equivalence.
"""
from fractions import Fraction

from ..hypergraph import Hypergraph
from ..tensor_core import Tensor, Matrix, tensor_product, kron_all
from ..structure import EntanglementStructure, LocalMapFamily, epr, slot_permutation_matrix
from .base import CatalogConstruction


class NoLocalRoute(ValueError):
    pass


class PlaquetteAssembly:
    """plaquettes: vertex tuples; factors: (plaquette index, vertex tuple, Tensor)."""

    def __init__(self, vertex_count, plaquettes, factors):
        self.vertex_count = int(vertex_count)
        self.plaquettes = tuple(tuple(p) for p in plaquettes)
        fs = []
        for n, (p, vs, t) in enumerate(factors):
            vs = tuple(vs)
            if not set(vs) <= set(self.plaquettes[p]):
                raise ValueError(f"factor {n} has vertices {list(vs)} outside plaquette {p}")
            if t.party_count != len(vs):
                raise ValueError(f"factor {n}: tensor has {t.party_count} parties for {len(vs)} vertices")
            fs.append((int(p), vs, t))
        self.factors = tuple(fs)
        Hypergraph(self.vertex_count, self.plaquettes)  # validates

    def _plaquette_state(self, p):
        verts = self.plaquettes[p]
        mine = [(vs, t) for q, vs, t in self.factors if q == p]
        # product of factors, then one party per plaquette vertex (dim 1 where no factor reaches)
        acc = Tensor.scalar(1)
        owners = []
        for vs, t in mine:
            acc = tensor_product(acc, t)
            owners.extend(vs)
        groups = [[i for i, u in enumerate(owners) if u == v] for v in verts]
        for g in groups:
            if not g:
                g.append(acc.party_count)
                acc = tensor_product(acc, Tensor.basis((1,), (0,)))
        return acc.group(groups)

    def factor_order(self, v):
        """Slot order at vertex v in to_structure(): factor indices (and dims) per plaquette order."""
        out = []
        for p, verts in enumerate(self.plaquettes):
            if v not in verts:
                continue
            for n, (q, vs, t) in enumerate(self.factors):
                if q == p and v in vs:
                    out.append((n, t.dims[vs.index(v)]))
        return out

    def to_structure(self):
        return EntanglementStructure(Hypergraph(self.vertex_count, self.plaquettes),
                                     [self._plaquette_state(p) for p in range(len(self.plaquettes))])

    def with_factors(self, factors):
        return PlaquetteAssembly(self.vertex_count, self.plaquettes, factors)


def _regroup_maps(src: PlaquetteAssembly, dst: PlaquetteAssembly, key_src, key_dst):
    """Slot permutations per vertex: src factor order -> dst factor order.

    key_src / key_dst map a factor index to a common identity.
    """
    maps = []
    for v in range(src.vertex_count):
        a = [(key_src[n], d) for n, d in src.factor_order(v)]
        b = [(key_dst[n], d) for n, d in dst.factor_order(v)]
        pos = {k: i for i, (k, _) in enumerate(b)}
        maps.append(slot_permutation_matrix([d for _, d in a], [pos[k] for k, _ in a]))
    return maps


def epr_move(assembly: PlaquetteAssembly, factor: int, to_plaquette: int, via=None):
    """Move factor `factor` into plaquette `to_plaquette`.

    If the target plaquette holds all of the factor's vertices the move is an
    equivalence (slot regrouping).  Otherwise, for a 2-party EPR factor (u, w)
    with u in the target, an EPR factor (w, x) with x in the target is consumed
    by a Bell projection sum_i <ii| at w, creating EPR(u, x) in the target.
    """
    p, vs, t = assembly.factors[factor]
    target = assembly.plaquettes[to_plaquette]
    if set(vs) <= set(target):
        moved = list(assembly.factors)
        moved[factor] = (to_plaquette, vs, t)
        dst = assembly.with_factors(moved)
        ident = {n: n for n in range(len(moved))}
        fwd = _regroup_maps(assembly, dst, ident, ident)
        back = _regroup_maps(dst, assembly, ident, ident)
        return CatalogConstruction(
            f"epr_move_{factor}_to_{to_plaquette}", assembly.to_structure(), dst.to_structure(),
            LocalMapFamily(fwd), "equivalence",
            "moving a pair between plaquettes that share its endpoints (slot regrouping)",
            inverse=LocalMapFamily(back))
    return _teleport(assembly, factor, to_plaquette, via)


def _is_epr(t):
    return t.party_count == 2 and t.dims[0] == t.dims[1] and t == epr(t.dims[0])


def _teleport(assembly, factor, to_plaquette, via):
    p, vs, t = assembly.factors[factor]
    target = set(assembly.plaquettes[to_plaquette])
    if not _is_epr(t):
        raise NoLocalRoute("no local route: only EPR factors can be teleported")
    D = t.dims[0]
    route = None
    for end in (0, 1):
        u, w = vs[end], vs[1 - end]
        if u not in target:
            continue
        for n, (q, ws, s) in enumerate(assembly.factors):
            if n == factor or not _is_epr(s) or s.dims[0] != D or w not in ws:
                continue
            x = ws[1 - ws.index(w)]
            if x in target and x != u and (via is None or via == w):
                route = (u, w, x, n)
                break
        if route:
            break
    if route is None:
        raise NoLocalRoute(f"no local route for factor {factor} into plaquette {to_plaquette}")
    u, w, x, other = route
    keep = [(n, f) for n, f in enumerate(assembly.factors) if n not in (factor, other)]
    new_factors = [f for _, f in keep] + [(to_plaquette, (u, x), epr(D))]
    dst = assembly.with_factors(new_factors)
    NEW = "teleported"
    key_src = {n: n for n in range(len(assembly.factors))}
    key_src[factor] = key_src[other] = NEW
    key_dst = {i: n for i, (n, _) in enumerate(keep)}
    key_dst[len(new_factors) - 1] = NEW
    maps = []
    for v in range(assembly.vertex_count):
        a = [(key_src[n], n, d) for n, d in assembly.factor_order(v)]
        b = [(key_dst[n], d) for n, d in dst.factor_order(v)]
        pos = {k: i for i, (k, _) in enumerate(b)}
        if v == w:
            # Bell projection on the two pair slots, regroup the rest
            maps.append(_bell_at(a, b, pos, D))
        else:
            maps.append(slot_permutation_matrix([d for _, _, d in a], [pos[k] for k, _, _ in a]))
    return CatalogConstruction(
        f"teleport_{factor}_to_{to_plaquette}", assembly.to_structure(), dst.to_structure(),
        LocalMapFamily(maps), "restriction",
        "teleportation: a Bell projection at the middle vertex joins two pairs into one")


def _bell_at(a, b, pos, D):
    """Map at the middle vertex: contract the two consumed slots with sum_i <ii|."""
    dims_in = [d for _, _, d in a]
    consumed = [i for i, (k, _, _) in enumerate(a) if k == "teleported"]
    rest = [i for i in range(len(a)) if i not in consumed]
    out_dims = [d for _, d in b]
    total = 1
    for d in dims_in:
        total *= d
    data = {}
    for col in range(total):
        digits = []
        x = col
        for d in reversed(dims_in):
            digits.append(x % d)
            x //= d
        digits.reverse()
        if digits[consumed[0]] != digits[consumed[1]]:
            continue
        out = [0] * len(out_dims)
        for i in rest:
            out[pos[a[i][0]]] = digits[i]
        row = 0
        for o, d in zip(out, out_dims):
            row = row * d + o
        data[(row, col)] = Fraction(1)
    rows = 1
    for d in out_dims:
        rows *= d
    return Matrix._raw(rows, total, data)


def four_cycle_assembly(D=2):
    """Vertices 0..3, plaquettes P1 = (0,1,2) and P2 = (0,2,3).

    P1 holds EPR(0,1), EPR(1,2), EPR(0,2); P2 holds EPR(2,3), EPR(3,0).
    """
    e = epr(D)
    return PlaquetteAssembly(4, [(0, 1, 2), (0, 2, 3)],
                             [(0, (0, 1), e), (0, (1, 2), e), (0, (0, 2), e), (1, (2, 3), e), (1, (3, 0), e)])
