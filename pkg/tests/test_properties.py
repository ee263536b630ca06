"""Seeded randomized property suites, CASES cases each."""
from collections import deque
from fractions import Fraction
from itertools import combinations

from entres.hypergraph import Hypergraph, is_acyclic
from entres.tensor_core import Tensor, Matrix, kron_all, apply_local_maps, flatten, matrix_rank, determinant
from entres.structure import (EntanglementStructure, LocalMapFamily, verify_restriction,
                              fold_structure, push_maps_through_folding, check_stabilizer, epr_gauge,
                              split_shared_vertex_map, SplitFailure, double_w_structure, double_w_stabilizer,
                              ghz, epr, w_state)
from entres.contraction import CovectorAssignment, contract, contract_oracle
from helpers import rng_for, random_tensor, random_matrix, rand_frac

CASES = 200


# -- generators -------------------------------------------------------------

def random_graph(rng, max_vertices=5, max_edges=3):
    V = rng.randint(2, max_vertices)
    edges = []
    for _ in range(rng.randint(1, max_edges)):
        k = rng.randint(2, min(3, V))
        e = rng.sample(range(V), k)
        edges.append(tuple(e))
    return Hypergraph(V, edges)


def random_acyclic_graph(rng, max_edges=4):
    """Grow a Berge-acyclic hypergraph: each new edge meets the existing vertices in at most one."""
    V = 0
    edges = []
    for _ in range(rng.randint(1, max_edges)):
        k = rng.randint(2, 3)
        if V and rng.random() < 0.8:
            e = [rng.randrange(V)] + list(range(V, V + k - 1))
            V += k - 1
        else:
            e = list(range(V, V + k))
            V += k
        rng.shuffle(e)
        edges.append(tuple(e))
    perm = list(range(V))
    rng.shuffle(perm)
    rng.shuffle(edges)
    g = Hypergraph(V, [tuple(perm[v] for v in e) for e in edges])
    assert is_acyclic(g)
    return g


def random_edge_state(rng, k):
    pick = rng.random()
    if pick < 0.2:
        return ghz(rng.randint(1, 3), k)
    if pick < 0.35 and k == 2:
        return epr(rng.randint(2, 3))
    if pick < 0.5 and k == 3:
        return w_state(3)
    return random_tensor(rng, tuple(rng.randint(1, 2) for _ in range(k)), density=0.5)


def random_structure(rng, g):
    return EntanglementStructure(g, [random_edge_state(rng, len(e)) for e in g.edges])


def edgewise_restriction(rng, s):
    """dst with edge states (slot maps) . phi_e, and the assembled vertex maps."""
    slot_maps, states = [], []
    for t in s.edge_states:
        for _ in range(100):
            ms = [random_matrix(rng, rng.randint(1, 2), d) for d in t.dims]
            img = apply_local_maps(t, ms)
            if not img.is_zero():
                break
        else:
            raise RuntimeError("could not draw a nonzero edge image")
        slot_maps.append(ms)
        states.append(img)
    dst = EntanglementStructure(s.graph, states)
    maps = [kron_all([slot_maps[n][j] for n, j, _ in s.slots(v)]) for v in range(s.vertex_count)]
    return dst, LocalMapFamily(maps)


def random_surjection(rng, n):
    t = rng.randint(1, n)
    vm = list(range(t)) + [rng.randrange(t) for _ in range(n - t)]
    rng.shuffle(vm)
    return vm


def random_invertible(rng, d):
    while True:
        g = random_matrix(rng, d, d, density=0.8)
        if determinant(g) != 0:
            return g


# -- folding soundness ------------------------------------------------------

def test_folding_soundness():
    checked = 0
    for seed in range(CASES):
        rng = rng_for(1000 + seed)
        if seed % 10 == 0:
            # non-product stabilizer on the shared vertices of two W states
            src = dst = double_w_structure()
            maps = double_w_stabilizer(rand_frac(rng))
        else:
            src = random_structure(rng, random_graph(rng))
            dst, maps = edgewise_restriction(rng, src)
        assert verify_restriction(src, dst, maps), seed
        vm = random_surjection(rng, src.vertex_count)
        pushed = push_maps_through_folding(maps, vm, src, dst)
        res = verify_restriction(fold_structure(src, vm), fold_structure(dst, vm), pushed)
        assert res, (seed, vm, res.message)
        checked += 1
    assert checked >= CASES


# -- flattening monotonicity ------------------------------------------------

def _sides(k):
    for size in range(1, k):
        for S in combinations(range(k), size):
            if 0 in S:
                yield list(S)


def test_flattening_monotone_under_restriction():
    checked = 0
    for seed in range(CASES):
        rng = rng_for(2000 + seed)
        k = rng.randint(3, 4)
        src = random_tensor(rng, tuple(rng.randint(2, 3) for _ in range(k)), density=0.5)
        maps = [random_matrix(rng, rng.randint(1, 3), d) for d in src.dims]
        dst = apply_local_maps(src, maps)
        assert verify_restriction(src, dst, maps)
        for S in _sides(k):
            assert matrix_rank(flatten(dst, S)) <= matrix_rank(flatten(src, S)), (seed, S)
        checked += 1
    assert checked >= CASES


# -- acyclic edge-wise factorization -----------------------------------------

def test_acyclic_edgewise_assembly():
    """Per-edge restrictions assemble into a verified global restriction."""
    for seed in range(CASES):
        rng = rng_for(3000 + seed)
        src = random_structure(rng, random_acyclic_graph(rng))
        dst, maps = edgewise_restriction(rng, src)
        res = verify_restriction(src, dst, maps)
        assert res, (seed, res.message)


def _branches(g, e):
    """Vertex map sending each vertex to the position in e of its branch (g minus edge e)."""
    lab = [None] * g.vertex_count
    q = deque()
    for i, v in enumerate(e):
        lab[v] = i
        q.append(v)
    ei = g.edges.index(e)
    while q:
        v = q.popleft()
        for n, f in enumerate(g.edges):
            if n == ei or v not in f:
                continue
            for u in f:
                if lab[u] is None:
                    lab[u] = lab[v]
                    q.append(u)
    return [0 if x is None else x for x in lab]


def _column(t: Tensor):
    size = 1
    for d in t.dims:
        size *= d
    v = t.group([list(range(t.party_count))])
    return Matrix(size, 1, {(i, 0): c for (i,), c in v.items()})


def _edge_restriction_from_global(src, dst, maps, e):
    """Fold onto edge e, insert the source's other edges, project onto the target's other edges."""
    g = src.graph
    n_e = g.edges.index(e)
    vm = _branches(g, e)
    pushed = push_maps_through_folding(maps, vm, src, dst)
    scale = Fraction(1)
    per_edge = []
    for w in range(len(e)):
        embed, proj = [], []
        for n, f in enumerate(g.edges):
            if not any(vm[u] == w for u in f):
                continue
            if n == n_e:
                embed.append(Matrix.identity(src.edge_states[n].dims[w]))
                proj.append(Matrix.identity(dst.edge_states[n].dims[w]))
            else:
                embed.append(_column(src.edge_states[n]))
                col = _column(dst.edge_states[n])
                proj.append(col.T)
                scale *= sum(c * c for _, c in col.items())
        per_edge.append(kron_all(proj) @ pushed[w] @ kron_all(embed))
    per_edge[0] = per_edge[0].scale(1 / scale)
    return per_edge


def test_acyclic_global_restriction_folds_to_each_edge():
    """A verified global restriction on an acyclic graph yields a restriction on every single edge."""
    checked = 0
    for seed in range(CASES):
        rng = rng_for(4000 + seed)
        src = random_structure(rng, random_acyclic_graph(rng, max_edges=3))
        dst, maps = edgewise_restriction(rng, src)
        # twist by an EPR gauge on EPR edges so the global maps are not the edge-wise ones
        gauge = {}
        for n, t in enumerate(src.edge_states):
            if t.party_count == 2 and t == epr(t.dims[0]):
                g = random_invertible(rng, t.dims[0])
                gauge[n] = epr_gauge(g).maps
        if gauge:
            twist = []
            for v in range(src.vertex_count):
                parts = [gauge[n][j] if n in gauge else Matrix.identity(d) for n, j, d in src.slots(v)]
                twist.append(kron_all(parts))
            maps = maps.compose(LocalMapFamily(twist))
        assert verify_restriction(src, dst, maps), seed
        for e in src.graph.edges:
            n = src.graph.edges.index(e)
            a = _edge_restriction_from_global(src, dst, maps, e)
            res = verify_restriction(src.edge_states[n], dst.edge_states[n], a)
            assert res, (seed, e, res.message)
        checked += 1
    assert checked >= CASES


# -- split reconstruction ---------------------------------------------------

def _concise_at(rng, k, v):
    while True:
        t = random_tensor(rng, tuple(rng.randint(1, 3) for _ in range(k)), density=0.6)
        if matrix_rank(flatten(t, [v])) == t.dims[v]:
            return t


def test_split_shared_vertex_reconstruction():
    split_ok = 0
    for seed in range(CASES):
        rng = rng_for(5000 + seed)
        v1, v2 = rng.randrange(2), rng.randrange(3)
        phi1, phi2 = _concise_at(rng, 2, v1), _concise_at(rng, 3, v2)
        d1, d2 = phi1.dims[v1], phi2.dims[v2]
        k1, k2 = rng.randint(1, 3), rng.randint(1, 3)
        if seed % 4:
            M1, M2 = random_matrix(rng, k1, d1), random_matrix(rng, k2, d2)
            M = M1.kron(M2)
            A, B = split_shared_vertex_map(M, phi1, phi2, (k1, k2), v1, v2)
            assert A.kron(B) == M, seed
            split_ok += 1
        else:
            M = random_matrix(rng, k1 * k2, d1 * d2, density=0.9)
            try:
                A, B = split_shared_vertex_map(M, phi1, phi2, (k1, k2), v1, v2)
            except SplitFailure as exc:
                assert exc.witness is not None
            else:
                assert A.kron(B) == M, seed
    assert split_ok >= CASES // 2


# -- stabilizers ------------------------------------------------------------

def test_epr_gauge_family_stabilizes():
    for seed in range(CASES):
        rng = rng_for(6000 + seed)
        D = rng.randint(2, 4)
        g = random_invertible(rng, D)
        fam = epr_gauge(g)
        assert check_stabilizer(EntanglementStructure(Hypergraph(2, [(0, 1)]), [epr(D)]), fam), seed
        # the transpose alone is not enough unless g is orthogonal up to scale
        wrong = LocalMapFamily([g, g])
        if g @ g.T != Matrix.identity(D):
            assert not check_stabilizer(EntanglementStructure(Hypergraph(2, [(0, 1)]), [epr(D)]), wrong)


def test_double_w_stabilizer_family():
    s = double_w_structure()
    for seed in range(CASES):
        rng = rng_for(7000 + seed)
        q = rand_frac(rng, -9, 9, 7)
        assert check_stabilizer(s, double_w_stabilizer(q)), (seed, q)


# -- contraction ------------------------------------------------------------

def test_contraction_plan_independence_and_oracle():
    for seed in range(CASES):
        rng = rng_for(8000 + seed)
        s = random_structure(rng, random_graph(rng, max_vertices=5, max_edges=4))
        a = CovectorAssignment([[rand_frac(rng) for _ in range(d)] for d in s.vertex_dims])
        want = contract_oracle(s, a)
        assert contract(s, a, "greedy") == want, seed
        assert contract(s, a, "naive") == want, seed
