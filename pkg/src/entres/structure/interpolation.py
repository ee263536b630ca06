"""Turning a degeneration into a restriction from src (x) GHZ_{e+1} (Lagrange interpolation)."""
from fractions import Fraction

from ..tensor_core import Tensor, Matrix, kron
from .catalog import ghz
from .core import (EntanglementStructure, LocalMapFamily, PolyMapFamily, verify_degeneration,
                   MATERIALIZE_CAP)


def lagrange_weights_at_zero(nodes):
    """w_m with sum_m w_m p(q_m) = p(0) for every polynomial p of degree < len(nodes)."""
    nodes = [Fraction(q) for q in nodes]
    out = []
    for m, qm in enumerate(nodes):
        w = Fraction(1)
        for j, qj in enumerate(nodes):
            if j != m:
                w *= -qj / (qm - qj)
        out.append(w)
    return out


def interpolation_source(src, e):
    """src (x) GHZ_{e+1}(k): for a structure, one extra edge on all vertices (last slot everywhere)."""
    if isinstance(src, Tensor):
        return kron(src, ghz(e + 1, src.party_count))
    V = src.graph.vertex_count
    return src.with_edge(tuple(range(V)), ghz(e + 1, V))


def interpolate_degeneration(src, dst, polymaps, cap: int = MATERIALIZE_CAP):
    """Exact restriction maps src (x) GHZ_{e+1} >= dst.

    With nodes q_m = 1..e+1 and weights c_m = w_m / q_m^d,
    sum_m c_m T(q_m) phi = psi, so M'_v = sum_m T_v(q_m) (x) <m| realises the
    sum on the GHZ branch m; c_m goes into the map of vertex 0.
    Returns (source, LocalMapFamily, (d, e)).
    """
    polymaps = polymaps if isinstance(polymaps, PolyMapFamily) else PolyMapFamily(polymaps)
    res = verify_degeneration(src, dst, polymaps, cap)
    if not res:
        raise ValueError(f"degeneration invalid: {res.message}")
    d, e = res.info["d"], res.info["e"]
    k = e + 1
    nodes = list(range(1, k + 1))
    weights = lagrange_weights_at_zero(nodes)
    coeffs = [w / Fraction(q) ** d for w, q in zip(weights, nodes)]
    evaluated = [polymaps.evaluate(q) for q in nodes]
    maps = []
    for v in range(len(polymaps)):
        rows, cols = polymaps[v].rows, polymaps[v].cols
        data = {}
        for m in range(k):
            c = coeffs[m] if v == 0 else 1
            for (i, j), x in evaluated[m][v].items():
                data[(i, j * k + m)] = x * c
        maps.append(Matrix._raw(rows, cols * k, {key: val for key, val in data.items() if val}))
    return interpolation_source(src, e), LocalMapFamily(maps), (d, e)
