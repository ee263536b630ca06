import networkx as nx
import pytest

from entres.hypergraph import (Hypergraph, Folding, square_lattice, square_lattice_directions,
                               plaquette_square_lattice, kagome_lattice, kagome_site_kinds, triangular_lattice,
                               fan, single_edge, is_acyclic, fold, compose_maps, all_bipartition_foldings,
                               bipartition_sides, kagome_fan_folding, triangular_fan_folding)
from helpers import rng_for


def incidence_forest(g):
    b = nx.Graph()
    b.add_nodes_from(("v", v) for v in range(g.vertex_count))
    for n, e in enumerate(g.edges):
        for v in e:
            b.add_edge(("e", n), ("v", v))
    return nx.is_forest(b)


def test_validation():
    with pytest.raises(ValueError):
        Hypergraph(0, [])
    with pytest.raises(ValueError):
        Hypergraph(3, [(0, 0, 1)])
    with pytest.raises(ValueError):
        Hypergraph(3, [(0, 3)])
    with pytest.raises(ValueError):
        Hypergraph(3, [()])


def test_json_roundtrip():
    g = kagome_lattice(2, 2)
    assert Hypergraph.from_json(g.to_json()) == g


def test_square_lattice_counts_and_order():
    g = square_lattice(2, 3)
    assert g.vertex_count == 6 and g.edge_count == 7
    assert g.edges[:2] == ((0, 1), (0, 3))
    assert square_lattice_directions(2, 3)[:2] == ["h", "v"]
    p = square_lattice(3, 3, periodic=True)
    assert p.edge_count == 18 and all(p.degree(v) == 4 for v in range(9))
    with pytest.raises(ValueError):
        square_lattice(1, 4)


def test_plaquettes():
    g = plaquette_square_lattice(3, 3)
    assert g.edge_count == 4 and g.edges[0] == (3, 0, 1, 4)
    assert plaquette_square_lattice(2, 2, periodic=True).edge_count == 4


def test_kagome_shapes():
    g = kagome_lattice(1, 1)
    assert g.vertex_count == 5 and g.edge_count == 2
    p = kagome_lattice(2, 2, "periodic")
    assert p.vertex_count == 12 and p.edge_count == 8
    assert all(p.degree(v) == 2 for v in range(12))
    kinds = kagome_site_kinds(2, 2, "periodic")
    assert sorted(k[1] for k in kinds).count("b") == 4


def test_triangular_and_fan():
    t = triangular_lattice(3, 3)
    assert t.edge_count == 18 and all(t.degree(v) == 6 for v in range(9))
    assert triangular_lattice(3, 3, half_filled=True).edge_count == 9
    f = fan(3)
    assert f.edges == ((0, 1, 2), (0, 1, 3), (0, 1, 4))
    assert single_edge(4).edges == ((0, 1, 2, 3),)


def test_acyclicity_examples():
    assert is_acyclic(fan(1))
    assert not is_acyclic(fan(2))          # two edges share A and B
    assert is_acyclic(Hypergraph(5, [(0, 1, 2), (2, 3, 4)]))
    assert not is_acyclic(square_lattice(2, 2))
    assert is_acyclic(Hypergraph(4, [(0, 1), (1, 2), (1, 3)]))


@pytest.mark.parametrize("seed", range(40))
def test_acyclicity_against_incidence_forest(seed):
    rng = rng_for(seed)
    V = rng.randint(2, 8)
    edges = []
    for _ in range(rng.randint(1, 5)):
        k = rng.randint(1, min(3, V))
        edges.append(tuple(rng.sample(range(V), k)))
    g = Hypergraph(V, edges)
    assert is_acyclic(g) == incidence_forest(g)


def test_fold_and_compose():
    g = Hypergraph(4, [(0, 1), (2, 3), (1, 2)])
    h, f = fold(g, (0, 0, 1, 1))
    assert h.edges == ((0,), (1,), (0, 1))
    assert f.preimage(1) == [2, 3]
    with pytest.raises(ValueError):
        fold(g, (0, 0, 2, 2))
    assert compose_maps((0, 1, 1, 2), (1, 0, 0)) == (1, 0, 0, 0)


def test_bipartitions_enumerated_once():
    g = Hypergraph(4, [])
    fs = all_bipartition_foldings(g)
    assert len(fs) == 7
    sides = {frozenset(bipartition_sides(f)) for f in fs}
    assert len(sides) == 7 and all(3 not in s for s in sides)
    assert len(all_bipartition_foldings(g, max_count=3)) == 3


def test_kagome_fan_folding():
    g, (h, f) = kagome_fan_folding(2, 2)
    assert h.vertex_count == 6
    assert {frozenset(e) for e in h.edges} == {frozenset((0, 1, 2 + k)) for k in range(4)}
    assert all(sum(1 for e in h.edges if set(e) == {0, 1, 2 + k}) == 2 for k in range(4))


def test_triangular_fan_folding():
    g, (h, f) = triangular_fan_folding(3, 3)
    counts = {}
    for e in h.edges:
        counts[frozenset(e)] = counts.get(frozenset(e), 0) + 1
    assert len(counts) == 3 and set(counts.values()) == {6}
    with pytest.raises(ValueError):
        triangular_fan_folding(4, 3)
