from fractions import Fraction
from itertools import product, permutations

import numpy as np
import pytest

from entres.tensor_core import (Tensor, Matrix, to_rational, tensor_product, kron, kron_power, direct_sum,
                                kron_all, matrix_rank, rank_mod_p, rref, inverse, right_inverse, determinant,
                                nullspace, EpsPoly, EPS, PolyMatrix, flatten, apply_local_maps, poly_apply,
                                poly_apply_and_leading, NullDegenerationError, reduced_entropy,
                                hyperdeterminant_222, als_rank_fit)
from entres.structure import ghz, w_state, epr, epr_triangle
from helpers import rng_for, random_tensor, random_matrix, apply_oracle, gauss_rank, matrix_rows, dense


def test_scalars_reject_float_and_complex():
    assert to_rational("3/4") == Fraction(3, 4)
    assert to_rational(5) == 5
    with pytest.raises(TypeError):
        to_rational(0.5)
    with pytest.raises(TypeError):
        to_rational(1 + 2j)
    with pytest.raises(TypeError):
        to_rational("1+2j")
    with pytest.raises(TypeError):
        Tensor((2,), {(0,): 0.25})


def test_tensor_validation_and_cancellation():
    t = Tensor((2, 2), [((0, 1), 1), ((0, 1), -1), ((1, 1), 2)])
    assert t.nnz == 1 and t.coefficient((1, 1)) == 2
    with pytest.raises(ValueError):
        Tensor((2, 2), {(2, 0): 1})
    with pytest.raises(ValueError):
        Tensor((2, 0))
    with pytest.raises(ValueError):
        Tensor((2, 2), {(0,): 1})


def test_json_roundtrip_and_digest():
    t = w_state(3)
    doc = t.to_json()
    assert Tensor.from_json(doc) == t
    assert Tensor.from_json(doc).digest() == t.digest()
    assert t.digest() != ghz(2, 3).digest()


def test_permute_group_split_inverse():
    rng = rng_for(1)
    t = random_tensor(rng, (2, 3, 2))
    g = t.group([[0, 2], [1]])
    assert g.dims == (4, 3)
    # group is row-major in the listed order: (i0, i2) -> 2*i0 + i2
    for (i, j, k), v in t.items():
        assert g.coefficient((2 * i + k, j)) == v
    assert g.split(0, [2, 2]).permute([0, 2, 1]) == t
    assert t.permute([2, 0, 1]).permute([1, 2, 0]) == t


def test_kron_pairing_convention():
    a, b = epr(2), epr(3)
    k = kron(a, b)
    assert k == epr(6)
    assert kron_power(ghz(2, 3), 2) == ghz(4, 3)
    assert kron(ghz(2, 3), ghz(3, 3)).dims == (6, 6, 6)
    with pytest.raises(ValueError):
        kron(epr(2), ghz(2, 3))


def test_tensor_product_and_direct_sum():
    assert tensor_product(epr(2), Tensor.vector([1])).dims == (2, 2, 1)
    assert direct_sum(ghz(2, 3), ghz(3, 3)) == ghz(5, 3)


def test_flatten_layout():
    t = epr_triangle(2)
    m = flatten(t, [0])
    assert (m.rows, m.cols) == (4, 16)
    assert matrix_rank(m) == 4
    with pytest.raises(ValueError):
        flatten(t, [])
    with pytest.raises(ValueError):
        flatten(t, [0, 1, 2])


@pytest.mark.parametrize("seed", range(30))
def test_rank_against_independent_elimination(seed):
    rng = rng_for(seed)
    r, c = rng.randint(1, 7), rng.randint(1, 7)
    m = random_matrix(rng, r, c, density=rng.random())
    # low-rank products too
    if seed % 3 == 0:
        k = rng.randint(1, 3)
        m = random_matrix(rng, r, k) @ random_matrix(rng, k, c)
    assert matrix_rank(m) == gauss_rank(matrix_rows(m)) if m.rows else True
    assert rank_mod_p(m) <= matrix_rank(m)


def test_rank_against_numpy_on_integers():
    rng = rng_for(7)
    for _ in range(20):
        m = random_matrix(rng, 6, 5)
        arr = np.array([[float(x) for x in row] for row in m.to_lists()])
        assert matrix_rank(m) == np.linalg.matrix_rank(arr)


def test_inverse_determinant_nullspace():
    m = Matrix.from_rows([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    assert m @ inverse(m) == Matrix.identity(3)
    # cofactor expansion oracle
    a = m.to_lists()
    cof = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
           + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    assert determinant(m) == cof == 18
    s = Matrix.from_rows([[1, 2, 3], [2, 4, 6]])
    ns = nullspace(s)
    assert len(ns) == 2
    for v in ns:
        assert all(sum(s[i, j] * v[j] for j in range(3)) == 0 for i in range(2))
    with pytest.raises(ValueError):
        inverse(s.submatrix([0, 1], [0, 1]))
    w = Matrix.from_rows([[1, 0, 2], [0, 1, 1]])
    assert w @ right_inverse(w) == Matrix.identity(2)
    red, piv = rref(s)
    assert piv == [0]


def test_matrix_kron_matches_kron_all():
    a = Matrix.from_rows([[1, 2], [0, 1]])
    b = Matrix.from_rows([[0, 1], [1, 0]])
    assert kron_all([a, b]) == a.kron(b)
    assert a.kron(b)[1, 2] == 2 * 1


@pytest.mark.parametrize("seed", range(20))
def test_apply_local_maps_against_oracle(seed):
    rng = rng_for(100 + seed)
    dims = [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
    t = random_tensor(rng, dims)
    maps = [random_matrix(rng, rng.randint(1, 3), d) for d in dims]
    assert apply_local_maps(t, maps) == apply_oracle(t, maps)


def test_apply_local_maps_dim_error():
    with pytest.raises(ValueError, match="dimension mismatch at party 1"):
        apply_local_maps(ghz(2, 3), [Matrix.identity(2), Matrix.identity(3), Matrix.identity(2)])


def test_eps_poly_arithmetic():
    p = EpsPoly({0: 1, 1: 2})
    q = EpsPoly({1: -2})
    assert (p + q) == EpsPoly({0: 1})
    assert (p * p).coefficient(2) == 4
    assert p.evaluate(Fraction(1, 2)) == 2
    assert (EPS ** 3).degree() == 3


def test_poly_apply_leading_term_and_null():
    # W degeneration from GHZ_2: d = 1
    from entres.constructions import w_maps
    d, lead, _ = poly_apply_and_leading(ghz(2, 3), w_maps())
    assert d == 1 and lead == w_state(3)
    zero = PolyMatrix.from_matrix(Matrix.zeros(2, 2))
    with pytest.raises(NullDegenerationError):
        poly_apply_and_leading(ghz(2, 3), [zero, zero, zero])


def test_reduced_entropy_values():
    assert reduced_entropy(ghz(2, 3), 0) == pytest.approx(1.0)
    h = -(1 / 3) * np.log2(1 / 3) - (2 / 3) * np.log2(2 / 3)
    assert reduced_entropy(w_state(3), 1) == pytest.approx(h)
    with pytest.raises(ValueError):
        reduced_entropy(Tensor((2, 2)), 0)


def test_hyperdeterminant_values():
    assert hyperdeterminant_222(ghz(2, 3)) == 1
    assert hyperdeterminant_222(w_state(3)) == 0
    prod_ = Tensor((2, 2, 2), {(0, 0, 0): 1})
    assert hyperdeterminant_222(prod_) == 0
    # SL invariance up to det^2 per party: scaling party 0 by 2 multiplies by 4
    m = Matrix.from_rows([[2, 0], [0, 2]])
    t2 = apply_local_maps(ghz(2, 3), [m, Matrix.identity(2), Matrix.identity(2)])
    assert hyperdeterminant_222(t2) == 16


def test_als_screening():
    assert als_rank_fit(w_state(3), 3, seed=0) < 1e-8
    assert als_rank_fit(w_state(3), 1, seed=0) > 1e-3


def test_als_deterministic_for_seed():
    assert als_rank_fit(epr_triangle(2), 6, iterations=40, seed=3) == als_rank_fit(epr_triangle(2), 6, iterations=40, seed=3)
