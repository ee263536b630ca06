"""Substitution-method ingredients: slices <x| on one party, rank-drop probes, span dimensions.

Everything is rational, so conjugating a covector is the identity.
"""
from fractions import Fraction

from ..tensor_core import Tensor, Matrix, matrix_rank, flatten, to_rational
from ..structure import w_state, lambda_state, epr, epr_triangle


def slice(t: Tensor, party: int, covector) -> Tensor:
    """Contract `party` with the row vector `covector`; the other parties keep their order."""
    if not 0 <= party < t.party_count:
        raise ValueError(f"no party {party} in a {t.party_count}-party tensor")
    x = [to_rational(c) for c in covector]
    if len(x) != t.dims[party]:
        raise ValueError(f"covector has length {len(x)}, party {party} has dimension {t.dims[party]}")
    dims = t.dims[:party] + t.dims[party + 1:]
    out = {}
    for idx, v in t.items():
        c = x[idx[party]]
        if not c:
            continue
        key = idx[:party] + idx[party + 1:]
        s = out.get(key, 0) + c * v
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return Tensor._raw(dims, out)


def slice_rank(s: Tensor, left=None) -> int:
    """Rank of a slice viewed as a matrix: the first party (or `left`) against the rest."""
    if s.party_count == 0:
        return 0 if s.is_zero() else 1
    if s.party_count == 1:
        return 0 if s.is_zero() else 1
    return matrix_rank(flatten(s, left if left is not None else [0]))


def slice_matrix(t: Tensor, party: int, covector, left=None) -> Matrix:
    s = slice(t, party, covector)
    return flatten(s, left if left is not None else [0])


def rank_drop_probe(t: Tensor, party: int, samples, k: int, left=None):
    """Per sample covector: exact slice rank and whether it lies in X^(k) = {x : rank <= k}."""
    out = []
    for x in samples:
        r = slice_rank(slice(t, party, x), left)
        out.append({"x": [str(to_rational(c)) for c in x], "rank": r, "member": r <= k})
    return out


def span_dimension(tensors) -> int:
    tensors = list(tensors)
    if not tensors:
        return 0
    dims = tensors[0].dims
    for n, v in enumerate(tensors):
        if v.dims != dims:
            raise ValueError(f"dimension mismatch: item {n} has dims {list(v.dims)}, expected {list(dims)}")
    size = 1
    for d in dims:
        size *= d
    data = {}
    for i, v in enumerate(tensors):
        for idx, c in v.items():
            col = 0
            for j, d in zip(idx, dims):
                col = col * d + j
            data[(i, col)] = c
    return matrix_rank(Matrix._raw(len(tensors), size, data))


# fixtures

def w_slice(x):
    """<0| + x<1| on the first party of W: |01> + |10> + x|00>."""
    return slice(w_state(3), 0, [1, x])


def lambda_slice_matrix(x):
    """3 x 3 matrix of <x| applied to the first party of lambda."""
    return slice_matrix(lambda_state(), 0, x)


def lambda_slice_expected(x):
    x0, x1, x2 = (to_rational(c) for c in x)
    return Matrix.from_rows([[0, x2, -x1], [-x2, 0, x0], [x1, -x0, x2]])


def psi_state():
    """psi = lambda(A', B1', C1') (x) EPR_3(B2', C2'), parties A, B = B1'B2', C = C1'C2'."""
    lam = lambda_state()
    e = epr(3)
    out = {}
    for (a, b1, c1), v in lam.items():
        for (b2, c2), w in e.items():
            out[(a, b1 * 3 + b2, c1 * 3 + c2)] = v * w
    return Tensor((3, 9, 9), out)


def phi_state():
    """phi = EPR_2(A1, B1) (x) EPR_2(A2, C1) (x) EPR_8(B2, C2), A = A1A2, B = B1B2, C = C1C2."""
    out = {}
    for a1 in range(2):
        for a2 in range(2):
            for k in range(8):
                out[(a1 * 2 + a2, a1 * 8 + k, a2 * 8 + k)] = Fraction(1)
    return Tensor((4, 16, 16), out)


def matrix_of_vector(x, rows, cols):
    x = [to_rational(c) for c in x]
    if len(x) != rows * cols:
        raise ValueError(f"vector of length {len(x)} is not {rows} x {cols}")
    return Matrix(rows, cols, {(i // cols, i % cols): c for i, c in enumerate(x) if c})


def four_vector_family(a, b, c):
    """x1 = |1>(|0> + c|1>), x2 = (|0> + b|1>)|1>, x3 = |0>(b|0> - a|1>), x4 = (c|0> - a|1>)|0>.

    When b = c = 0 the list degenerates; the branch uses |10>, |01>, (|0> + |1>)(|0> + a|1>).
    """
    a, b, c = (to_rational(v) for v in (a, b, c))

    def two(u, v):
        return Tensor((2, 2), {(i, j): u[i] * v[j] for i in range(2) for j in range(2) if u[i] * v[j]})
    if b == 0 and c == 0:
        return [two((0, 1), (1, 0)), two((1, 0), (0, 1)), two((1, 1), (1, a))]
    return [two((0, 1), (1, c)), two((1, b), (0, 1)), two((1, 0), (b, -a)), two((c, -a), (1, 0))]
