from fractions import Fraction

import pytest

from entres.hypergraph import Hypergraph, square_lattice, fan, kagome_lattice
from entres.structure import EntanglementStructure, uniform_structure, as_structure, ghz, epr, w_state, LocalMapFamily
from entres.contraction import (CovectorAssignment, ContractionPlan, contract, contract_oracle, greedy_order,
                                naive_plan, matchings_partition_brute, matchings_vertex_tensors, detect_grid,
                                vertex_roles, MATCHING_EDGE_CAP)
from entres.constructions import REGISTRY, get_construction
from helpers import rng_for, random_tensor, rand_frac


def _random_assignment(rng, s):
    return CovectorAssignment([[rand_frac(rng) for _ in range(d)] for d in s.vertex_dims])


def test_single_ghz_edge():
    s = as_structure(ghz(2, 3))
    assert contract(s, [[1, 1]] * 3) == 2
    assert contract(s, [[1, 1], [0, 0], [1, 1]]) == 0
    assert contract(s, [[1, 0], [1, 0], [1, 0]]) == 1


def test_dimension_mismatch_is_reported():
    s = as_structure(ghz(2, 3))
    with pytest.raises(ValueError, match="dimension mismatch at vertex 1"):
        contract(s, [[1, 1], [1, 1, 1], [1, 1]])
    with pytest.raises(ValueError):
        contract(s, [[1, 1]] * 2)


def test_plans_agree_with_oracle():
    rng = rng_for(21)
    g = Hypergraph(4, [(0, 1), (1, 2, 3), (0, 3), (2, 3)])
    s = EntanglementStructure(g, [random_tensor(rng, (2, 3)), random_tensor(rng, (3, 2, 2)),
                                  random_tensor(rng, (2, 2)), random_tensor(rng, (2, 3))])
    for _ in range(5):
        a = _random_assignment(rng, s)
        want = contract_oracle(s, a)
        assert contract(s, a) == contract(s, a, "naive") == contract(s, a, greedy_order(s, a)) == want


def test_plan_validation():
    s = as_structure(ghz(2, 3))
    with pytest.raises(ValueError):
        ContractionPlan([(0, 0)], 2, 0.0, "custom").validate()
    with pytest.raises(ValueError):
        ContractionPlan([(0, 1), (0, 2)], 3, 0.0, "custom").validate()
    a = [[1, 1]] * 3
    with pytest.raises(ValueError):
        contract(s, a, ContractionPlan([(0, 1)], 2, 0.0, "custom"))
    p = naive_plan(s)
    assert p.node_count == 4 and len(p.steps) == 3
    assert p.to_json()["kind"] == "naive"


def test_greedy_is_deterministic():
    s = uniform_structure(square_lattice(3, 3), epr(2))
    a = CovectorAssignment([[1] * d for d in s.vertex_dims])
    assert greedy_order(s, a).steps == greedy_order(s, a).steps


def test_covector_json_roundtrip():
    a = CovectorAssignment([[Fraction(1, 2), 3], [0, -1]])
    assert CovectorAssignment.from_json(a.to_json()).vectors == a.vectors
    with pytest.raises(ValueError):
        CovectorAssignment.from_json({"vectors": []})


@pytest.mark.parametrize("name", [n for n in REGISTRY if get_construction(n).kind != "degeneration"])
def test_contraction_pulls_back_along_restrictions(name):
    c = get_construction(name)
    src, dst = as_structure(c.source), as_structure(c.target)
    maps = c.maps.maps if isinstance(c.maps, LocalMapFamily) else list(c.maps)
    rng = rng_for(hash(name) % 1000)
    for _ in range(3):
        a = _random_assignment(rng, dst)
        assert contract(dst, a) == contract(src, a.apply_maps(maps))


# -- matchings --------------------------------------------------------------

def test_matching_examples():
    path = Hypergraph(2, [(0, 1)])
    assert matchings_partition_brute(path, [1]) == 2
    assert matchings_partition_brute(Hypergraph(3, [(0, 1), (1, 2)]), [1, 1]) == 3
    g = square_lattice(2, 2)
    assert matchings_partition_brute(g, [1] * 4) == 7
    s, a = matchings_vertex_tensors(g, [1] * 4)
    assert contract(s, a) == 7


def test_all_zero_weights_count_only_empty_matching():
    g = square_lattice(3, 3)
    s, a = matchings_vertex_tensors(g, [0] * g.edge_count)
    assert contract(s, a) == matchings_partition_brute(g, [0] * g.edge_count) == 1


@pytest.mark.parametrize("n,m,expected", [(2, 2, 7), (3, 3, 131), (2, 3, 22), (4, 4, 10012)])
def test_unit_weight_matching_counts(n, m, expected):
    g = square_lattice(n, m)
    s, a = matchings_vertex_tensors(g, [1] * g.edge_count)
    assert contract(s, a) == expected
    if g.edge_count <= MATCHING_EDGE_CAP:
        assert matchings_partition_brute(g, [1] * g.edge_count) == expected


def test_random_weights_match_brute_force():
    rng = rng_for(22)
    for n, m in [(2, 3), (3, 3), (3, 4)]:
        g = square_lattice(n, m)
        x = [rand_frac(rng) for _ in range(g.edge_count)]
        s, a = matchings_vertex_tensors(g, x)
        assert contract(s, a) == matchings_partition_brute(g, x)


def test_grid_detection_and_roles():
    assert detect_grid(square_lattice(3, 4)) == (3, 4)
    assert detect_grid(kagome_lattice(1, 1)) is None
    with pytest.raises(ValueError, match="unsupported graph"):
        matchings_vertex_tensors(Hypergraph(3, [(0, 1), (1, 2), (0, 2)]), [1, 1, 1])
    roles = vertex_roles(square_lattice(2, 2))
    assert sorted(r for rs in roles for r in rs) == sorted(["left", "right", "top", "down"] * 2)


def test_brute_force_guards():
    with pytest.raises(ValueError):
        matchings_partition_brute(Hypergraph(3, [(0, 1, 2)]), [1])
    g = square_lattice(4, 5)
    with pytest.raises(ValueError, match="cap"):
        matchings_partition_brute(g, [1] * g.edge_count)
    with pytest.raises(ValueError):
        matchings_partition_brute(Hypergraph(2, [(0, 1)]), [1, 2])
