from fractions import Fraction
import json

import pytest

from entres.hypergraph import Hypergraph, fan, kagome_lattice, square_lattice, fold
from entres.tensor_core import Tensor, Matrix, tensor_product, apply_local_maps, kron
from entres.structure import (EntanglementStructure, LocalMapFamily, PolyMapFamily, MaterializationError,
                              as_structure, uniform_structure, materialize, verify_restriction,
                              verify_degeneration, is_concise, fold_structure, push_maps_through_folding,
                              merge_parallel_edges, slot_permutation_matrix, interpolate_degeneration,
                              lagrange_weights_at_zero, check_stabilizer, split_shared_vertex_map, SplitFailure,
                              epr_gauge, double_w_structure, double_w_stabilizer, g_shared, structure_to_json,
                              structure_from_json, maps_to_json, maps_from_json, FormatError, catalog_state,
                              catalog_names, ghz, epr, epr_triangle, w_state, lambda_state, bini, epr_square,
                              global_ghz_plaquette, product_state, dump_json, load_json)
from helpers import rng_for, random_tensor, random_matrix


def materialize_oracle(s):
    """tensor product of all edge states, then group parties vertex by vertex."""
    acc = Tensor.scalar(1)
    pos = {}
    for n, (e, t) in enumerate(zip(s.graph.edges, s.edge_states)):
        for j in range(len(e)):
            pos[(n, j)] = acc.party_count + j
        acc = tensor_product(acc, t)
    groups = [[pos[(n, j)] for n, j, _ in s.slots(v)] for v in range(s.vertex_count)]
    return acc.group(groups)


def test_catalog_states():
    assert ghz(3, 2) == epr(3)
    assert epr_triangle(2).dims == (4, 4, 4) and epr_triangle(2).nnz == 8
    assert w_state(3).nnz == 3
    assert lambda_state().nnz == 7
    assert bini().nnz == 6
    assert epr_square(2).dims == (4, 4, 4, 4) and epr_square(2).nnz == 16
    assert global_ghz_plaquette(2).dims == (9, 9, 9, 9)
    assert catalog_state("ghz", {"r": 4, "k": 2}) == epr(4)
    assert catalog_state("matmul", n=2) == epr_triangle(2)
    assert "w" in catalog_names()
    with pytest.raises(KeyError):
        catalog_state("nope")


def test_epr_triangle_is_matmul():
    # <a|<b|<c| coefficient is 1 iff A=(i,k), B=(j,k), C=(i,j)
    n = 2
    t = epr_triangle(n)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                assert t.coefficient((i * n + k, j * n + k, i * n + j)) == 1


def test_structure_validation():
    g = Hypergraph(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        EntanglementStructure(g, [epr(2)])
    with pytest.raises(ValueError):
        EntanglementStructure(g, [epr(2), ghz(2, 3)])
    with pytest.raises(ValueError):
        EntanglementStructure(g, [epr(2), Tensor((2, 2))])


def test_slots_and_dims():
    s = EntanglementStructure(Hypergraph(3, [(0, 1), (1, 2)]), [epr(2), epr(3)])
    assert s.slots(1) == [(0, 1, 2), (1, 0, 3)]
    assert s.vertex_dims == (2, 6, 3)


@pytest.mark.parametrize("seed", range(10))
def test_materialize_matches_oracle(seed):
    rng = rng_for(seed)
    V = rng.randint(2, 5)
    edges = [tuple(rng.sample(range(V), rng.randint(1, min(3, V)))) for _ in range(rng.randint(1, 3))]
    g = Hypergraph(V, edges)
    s = EntanglementStructure(g, [random_tensor(rng, [2] * len(e)) for e in edges])
    assert materialize(s) == materialize_oracle(s)


def test_materialize_cap():
    s = uniform_structure(kagome_lattice(2, 2, "periodic"), epr_triangle(3))
    with pytest.raises(MaterializationError, match="exceed the cap"):
        materialize(s, cap=1000)


def test_epr_lattice_materialization():
    s = uniform_structure(square_lattice(2, 2), epr(2))
    t = materialize(s)
    assert t.dims == (4, 4, 4, 4) and t.nnz == 16


def test_verify_restriction_and_errors():
    g = ghz(2, 3)
    proj = Matrix.from_rows([[1, 0]])
    res = verify_restriction(g, Tensor((1, 1, 1), {(0, 0, 0): 1}), [proj] * 3)
    assert res
    bad = verify_restriction(g, Tensor((1, 1, 1), {(0, 0, 0): 2}), [proj] * 3)
    assert not bad and bad.diffs
    with pytest.raises(ValueError, match="dimension mismatch at vertex 0"):
        verify_restriction(g, g, [Matrix.identity(3), Matrix.identity(2), Matrix.identity(2)])


def test_verify_degeneration_null():
    z = PolyMapFamily([Matrix.zeros(2, 2)] * 3)
    res = verify_degeneration(ghz(2, 3), w_state(3), z)
    assert not res and "null degeneration" in res.message


def test_conciseness():
    assert is_concise(w_state(3))
    assert not is_concise(ghz(2, 3).embed((3, 2, 2)))
    assert not is_concise(Tensor((2, 2)))


def test_fold_structure_groups_parties():
    s = uniform_structure(Hypergraph(4, [(0, 1), (2, 3)]), epr(2))
    f = fold_structure(s, (0, 0, 1, 1))
    assert f.graph.edges == ((0,), (1,))
    assert f.edge_states[0] == epr(2).group([[0, 1]])
    g = fold_structure(s, (0, 1, 0, 1))
    assert materialize(g) == kron(epr(2), epr(2))
    with pytest.raises(ValueError):
        fold_structure(s, (0, 0, 0, 0), drop_internal=True)


def test_merge_parallel_edges_kron():
    s = EntanglementStructure(Hypergraph(3, [(0, 1, 2), (2, 1, 0)]), [ghz(2, 3), w_state(3)])
    m = merge_parallel_edges(s)
    assert m.graph.edges == ((0, 1, 2),)
    assert m.edge_states[0] == kron(ghz(2, 3), w_state(3).permute([2, 1, 0]))
    assert m.vertex_dims == s.vertex_dims


def test_slot_permutation_matrix():
    p = slot_permutation_matrix([2, 3], [1, 0])
    t = Tensor((6,), {(1 * 3 + 2,): 1})       # |1>|2>
    out = apply_local_maps(t, [p])
    assert out.coefficient((2 * 2 + 1,)) == 1  # |2>|1>


def test_push_maps_through_folding():
    src = uniform_structure(Hypergraph(4, [(0, 1), (2, 3)]), ghz(3, 2))
    dst = uniform_structure(Hypergraph(4, [(0, 1), (2, 3)]), epr(2))
    proj = Matrix.from_rows([[1, 0, 0], [0, 1, 0]])
    maps = LocalMapFamily([proj] * 4)
    assert verify_restriction(src, dst, maps)
    vm = (0, 1, 1, 0)
    pushed = push_maps_through_folding(maps, vm, src, dst)
    assert verify_restriction(fold_structure(src, vm), fold_structure(dst, vm), pushed)


def test_io_roundtrip(tmp_path):
    s = uniform_structure(fan(2), w_state(3))
    doc = structure_to_json(s)
    assert structure_from_json(json.loads(json.dumps(doc))) == s
    ref = {"graph": {"vertices": 3, "edges": [[0, 1, 2]]}, "edge_states": [{"catalog": "ghz", "r": 2, "k": 3}]}
    assert structure_from_json(ref).edge_states[0] == ghz(2, 3)
    maps = LocalMapFamily([Matrix.from_rows([[1, Fraction(-1, 2)], [0, 3]])] * 2)
    mdoc = maps_to_json(maps)
    assert maps_from_json(json.loads(json.dumps(mdoc))) == maps
    sparse = {"maps": [{"rows": 2, "cols": 2, "sparse": [[0, 1, "5/3"]]}]}
    assert maps_from_json(sparse)[0][0, 1] == Fraction(5, 3)
    poly = {"maps": [{"rows": 1, "cols": 1, "entries": [[{"0": "1", "1": "2"}]]}]}
    assert isinstance(maps_from_json(poly), PolyMapFamily)
    p = tmp_path / "s.json"
    dump_json(doc, str(p))
    assert structure_from_json(load_json(str(p))) == s


def test_io_errors_name_paths(tmp_path):
    with pytest.raises(FormatError, match=r"\$\.edge_states\[0\]"):
        structure_from_json({"graph": {"vertices": 2, "edges": [[0, 1]]}, "edge_states": [{"catalog": "xx"}]})
    with pytest.raises(FormatError, match=r"\$\.maps\[0\]\.entries\[0\]\[0\]"):
        maps_from_json({"maps": [{"rows": 1, "cols": 1, "entries": [[0.5]]}]})
    with pytest.raises(FormatError, match="cannot read"):
        load_json(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(FormatError, match="invalid JSON"):
        load_json(str(bad))


def test_lagrange_weights():
    w = lagrange_weights_at_zero([1, 2, 3])
    for poly in ([1], [0, 1], [0, 0, 1], [5, -2, 7]):
        assert sum(wm * sum(c * q ** k for k, c in enumerate(poly)) for wm, q in zip(w, [1, 2, 3])) == poly[0]


def test_interpolation_w():
    from entres.constructions import w_maps
    src, fam, (d, e) = interpolate_degeneration(ghz(2, 3), w_state(3), w_maps())
    assert (d, e) == (1, 2)
    assert src.dims == (6, 6, 6)
    assert verify_restriction(src, w_state(3), fam)


def test_stabilizers():
    s = double_w_structure()
    assert check_stabilizer(s, double_w_stabilizer(2))
    assert check_stabilizer(s, double_w_stabilizer(Fraction(-1, 3)))
    assert not check_stabilizer(s, [g_shared(2), g_shared(2), Matrix.identity(2), Matrix.identity(2)])
    g = Matrix.from_rows([[1, 2], [0, 1]])
    assert check_stabilizer(as_structure(epr(2)), epr_gauge(g))
    with pytest.raises(ValueError):
        check_stabilizer(as_structure(epr(2)), [Matrix.from_rows([[1, 0]]), Matrix.identity(2)])


def test_split_shared_vertex_map():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    b = Matrix.from_rows([[0, 1], [1, 1]])
    m1, m2 = split_shared_vertex_map(a.kron(b), w_state(3), w_state(3), (2, 2))
    assert m1.kron(m2) == a.kron(b)
    with pytest.raises(SplitFailure) as info:
        split_shared_vertex_map(g_shared(2), w_state(3), w_state(3), (2, 2))
    assert info.value.witness is not None
