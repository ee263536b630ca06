"""Named states.  All coefficients are integers."""
from ..hypergraph import Hypergraph
from ..tensor_core import Tensor


def ghz(r=2, k=3):
    r, k = int(r), int(k)
    if r < 1 or k < 1:
        raise ValueError("ghz needs r >= 1 and k >= 1")
    return Tensor._raw((r,) * k, {(i,) * k: 1 for i in range(r)})


def epr(D=2):
    return ghz(D, 2)


def epr_triangle(n=2):
    """sum_{i,j,k} |ik>_A |jk>_B |ij>_C; equals the n x n matrix multiplication tensor."""
    n = int(n)
    if n < 1:
        raise ValueError("epr_triangle needs n >= 1")
    terms = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                terms[(i * n + k, j * n + k, i * n + j)] = 1
    return Tensor._raw((n * n,) * 3, terms)


def w_state(k=3):
    k = int(k)
    if k < 2:
        raise ValueError("W needs k >= 2")
    return Tensor._raw((2,) * k, {tuple(int(p == q) for q in range(k)): 1 for p in range(k)})


def lambda_state():
    """sum eps_{ijk} |ijk> + |222> (Levi-Civita symbol)."""
    terms = {(2, 2, 2): 1}
    for (i, j, k), s in {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
                         (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}.items():
        terms[(i, j, k)] = s
    return Tensor._raw((3, 3, 3), terms)


BINI_TERMS = [
    ("00", "00", "00"), ("00", "01", "10"), ("01", "10", "00"),
    ("10", "00", "01"), ("01", "11", "10"), ("11", "10", "01"),
]


def bini():
    """The Bini tensor: three qubit EPR pairs with |11> projected out on C.

    Each party is two qubits; A.q2-B.q1, B.q2-C.q1 and C.q2-A.q1 are the pairs.
    """
    return Tensor._raw((4, 4, 4), {tuple(int(s, 2) for s in t): 1 for t in BINI_TERMS})


def epr_square(D=2):
    """Level-D EPR pairs on the 4-cycle 0-1-2-3-0, materialized per vertex."""
    from .core import EntanglementStructure, materialize
    g = Hypergraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    return materialize(EntanglementStructure(g, [epr(D)] * 4))


# corner terms of the plaquette state, in the printed order
# (side pair carrying the two EPR pairs); sides are AB, BC, CD, DA
PLAQUETTE_CORNERS = [("AB", "BC"), ("BC", "CD"), ("CD", "DA"), ("DA", "AB")]
# side -> ((party, slot), (party, slot)); slot 0 is the first qubit-like factor
PLAQUETTE_SIDES = {
    "AB": ((0, 1), (1, 0)),
    "BC": ((1, 1), (2, 0)),
    "CD": ((2, 1), (3, 0)),
    "DA": ((3, 1), (0, 0)),
}


def global_ghz_plaquette(n=2):
    """Four-party plaquette state (parties A, B, C, D = BL, TL, TR, BR).

    Each party holds two (n+1)-level slots.  Term c puts level-n EPR pairs on
    the two sides of corner c and |0> on every other slot; the first term is
    sum_ij |0i>_A |ij>_B |j0>_C |00>_D.
    """
    n = int(n)
    if n < 1:
        raise ValueError("global_ghz_plaquette needs n >= 1")
    d = n + 1
    terms = {}
    for sides in PLAQUETTE_CORNERS:
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                slots = [[0, 0] for _ in range(4)]
                for side, val in zip(sides, (i, j)):
                    for p, s in PLAQUETTE_SIDES[side]:
                        slots[p][s] = val
                terms[tuple(a * d + b for a, b in slots)] = 1
    return Tensor._raw((d * d,) * 4, terms)


def product_state(dims=(1, 1, 1)):
    dims = tuple(int(x) for x in dims)
    return Tensor._raw(dims, {(0,) * len(dims): 1})


CATALOG = {
    "ghz": ghz,
    "epr": epr,
    "epr_triangle": epr_triangle,
    "matmul": epr_triangle,
    "w": w_state,
    "lambda": lambda_state,
    "bini": bini,
    "epr_square": epr_square,
    "global_ghz_plaquette": global_ghz_plaquette,
    "product": product_state,
}


def catalog_state(name, params=None, **kw):
    """Look up a named state: catalog_state('ghz', r=2, k=3) or catalog_state('ghz', {'r': 2, 'k': 3})."""
    key = str(name).lower().replace("-", "_")
    if key not in CATALOG:
        raise KeyError(f"unknown catalog state {name!r}; known: {', '.join(sorted(CATALOG))}")
    args = dict(params or {})
    args.update(kw)
    return CATALOG[key](**args)


def catalog_names():
    return sorted(CATALOG)
