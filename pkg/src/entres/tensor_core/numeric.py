"""Floating-point helpers: entropies, the 2x2x2 hyperdeterminant, ALS evidence."""
import math
from fractions import Fraction

import numpy as np

from .tensor import Tensor

EIGEN_CUTOFF = 1e-12


def gram_matrix(t: Tensor, party: int):
    """Exact Gram matrix G = M M^T of the single-party flattening M (rows = party)."""
    if not 0 <= party < t.party_count:
        raise ValueError(f"no party {party}")
    groups = {}
    for idx, v in t.items():
        rest = idx[:party] + idx[party + 1:]
        groups.setdefault(rest, []).append((idx[party], v))
    n = t.dims[party]
    g = {}
    for entries in groups.values():
        for i, a in entries:
            for j, b in entries:
                g[(i, j)] = g.get((i, j), 0) + a * b
    out = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in g.items():
        out[i][j] = v
    return out


def reduced_entropy(t: Tensor, party: int) -> float:
    """von Neumann entropy (bits) of the party's reduced state of t/|t|."""
    if t.is_zero():
        raise ValueError("reduced entropy of the zero tensor")
    g = np.array([[float(x) for x in row] for row in gram_matrix(t, party)])
    tr = np.trace(g)
    lam = np.linalg.eigvalsh(g / tr)
    h = 0.0
    for x in lam:
        if x > EIGEN_CUTOFF:
            h -= x * math.log2(x)
    return max(h, 0.0)


def hyperdeterminant_222(t: Tensor) -> Fraction:
    """Cayley's hyperdeterminant of a 2x2x2 tensor."""
    if t.dims != (2, 2, 2):
        raise ValueError(f"hyperdeterminant needs dims (2,2,2), got {t.dims}")
    a = {}
    for i in range(2):
        for j in range(2):
            for k in range(2):
                a[f"{i}{j}{k}"] = t.coefficient((i, j, k))
    sq = (a["000"] ** 2 * a["111"] ** 2 + a["001"] ** 2 * a["110"] ** 2
          + a["010"] ** 2 * a["101"] ** 2 + a["100"] ** 2 * a["011"] ** 2)
    mixed = (a["000"] * a["111"] * a["011"] * a["100"] + a["000"] * a["111"] * a["101"] * a["010"]
             + a["000"] * a["111"] * a["110"] * a["001"] + a["011"] * a["100"] * a["101"] * a["010"]
             + a["011"] * a["100"] * a["110"] * a["001"] + a["101"] * a["010"] * a["110"] * a["001"])
    quartic = a["000"] * a["110"] * a["101"] * a["011"] + a["111"] * a["001"] * a["010"] * a["100"]
    return sq - 2 * mixed + 4 * quartic


def _khatri_rao(mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.einsum("ir,jr->ijr", out, m).reshape(-1, m.shape[1])
    return out


def _als_sweep(factors, unfold):
    k = len(factors)
    for p in range(k):
        kr = _khatri_rao([factors[q] for q in range(k) if q != p])
        factors[p] = np.linalg.lstsq(kr, unfold[p].T, rcond=None)[0].T
    return np.linalg.norm(unfold[0] - factors[0] @ _khatri_rao(factors[1:]).T)


def als_rank_fit(t: Tensor, r: int, iterations: int = 500, seed: int = 0, starts: int = 10) -> float:
    """Best Frobenius residual of a rank-r CP fit found by ALS.

    Evidence, not certificate: a small residual suggests (border) rank <= r, a
    large one proves nothing.  Deterministic for a given seed.  A quarter of
    the sweep budget screens ``starts`` random starting points; the best one
    gets the remaining sweeps (plain ALS stalls in swamps from unlucky starts).
    """
    if r < 1:
        raise ValueError("rank must be at least 1")
    x = t.to_numpy(float)
    k = x.ndim
    if k < 2:
        raise ValueError("ALS needs at least two parties")
    if np.linalg.norm(x) == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    unfold = [np.moveaxis(x, p, 0).reshape(x.shape[p], -1) for p in range(k)]
    starts = max(1, min(starts, iterations))
    burn = max(1, iterations // (4 * starts))
    candidates = []
    for _ in range(starts):
        factors = [rng.uniform(-1.0, 1.0, (d, r)) for d in x.shape]
        res = min(_als_sweep(factors, unfold) for _ in range(burn))
        candidates.append((res, factors))
    candidates.sort(key=lambda c: c[0])
    best, factors = candidates[0]
    for _ in range(max(0, iterations - burn * starts)):
        if best < 1e-14:
            break
        best = min(best, _als_sweep(factors, unfold))
    return float(best)
