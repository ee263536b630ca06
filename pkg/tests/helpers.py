"""Seeded generators and dense oracles shared by the test modules."""
from fractions import Fraction
from itertools import product
import random

from entres.tensor_core import Tensor, Matrix


def rng_for(seed):
    return random.Random(seed)


def rand_frac(rng, lo=-4, hi=4, den=3):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_tensor(rng, dims, density=0.6, lo=-3, hi=3):
    terms = {}
    for idx in product(*(range(d) for d in dims)):
        if rng.random() < density:
            v = rng.randint(lo, hi)
            if v:
                terms[idx] = v
    if not terms:
        terms[tuple(0 for _ in dims)] = 1
    return Tensor(dims, terms)


def random_matrix(rng, rows, cols, density=0.7, lo=-3, hi=3):
    return Matrix(rows, cols, {(i, j): rng.randint(lo, hi) for i in range(rows) for j in range(cols)
                               if rng.random() < density})


def dense(t):
    """Nested dict-free dense list indexed by flat row-major position."""
    size = 1
    for d in t.dims:
        size *= d
    out = [Fraction(0)] * size
    for idx, v in t.items():
        pos = 0
        for i, d in zip(idx, t.dims):
            pos = pos * d + i
        out[pos] = v
    return out


def apply_oracle(t, maps):
    """Dense (M_1 (x) ... (x) M_k) t by explicit summation."""
    dims = [m.rows for m in maps]
    out = {}
    for idx, v in t.items():
        cols = [[(i, m[i, j]) for i in range(m.rows) if m[i, j]] for m, j in zip(maps, idx)]
        for choice in product(*cols):
            key = tuple(i for i, _ in choice)
            w = v
            for _, c in choice:
                w *= c
            out[key] = out.get(key, 0) + w
    return Tensor(dims, {k: x for k, x in out.items() if x})


def gauss_rank(rows):
    """Plain Fraction Gaussian elimination (independent of the library's fraction-free code)."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def matrix_rows(m):
    return [[m[i, j] for j in range(m.cols)] for i in range(m.rows)]
