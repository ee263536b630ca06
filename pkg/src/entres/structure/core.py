"""Entanglement structures, local map families, exact verification and folding."""
from fractions import Fraction

from ..hypergraph import Hypergraph, Folding, fold
from ..tensor_core import Tensor, Matrix, PolyMatrix, kron, apply_local_maps, poly_apply, kron_all, matrix_rank, flatten
from ..tensor_core.poly import poly_kron_all

MATERIALIZE_CAP = 10 ** 7


class MaterializationError(ValueError):
    pass


class EntanglementStructure:
    """A hypergraph with one tensor per edge; party j of edge e sits at vertex e[j]."""

    __slots__ = ("graph", "edge_states", "_slots")

    def __init__(self, graph: Hypergraph, edge_states):
        edge_states = tuple(edge_states)
        if len(edge_states) != graph.edge_count:
            raise ValueError(f"{len(edge_states)} edge states for {graph.edge_count} edges")
        for n, (e, t) in enumerate(zip(graph.edges, edge_states)):
            if not isinstance(t, Tensor):
                raise TypeError(f"edge state {n} is not a Tensor")
            if t.party_count != len(e):
                raise ValueError(f"edge {n} has {len(e)} vertices but its state has {t.party_count} parties")
            if t.is_zero():
                raise ValueError(f"edge state {n} is zero")
        self.graph = graph
        self.edge_states = edge_states
        self._slots = None

    def __repr__(self):
        return f"EntanglementStructure({self.graph!r}, dims={self.vertex_dims})"

    def __eq__(self, other):
        return (isinstance(other, EntanglementStructure) and self.graph == other.graph
                and self.edge_states == other.edge_states)

    def __hash__(self):
        return hash((self.graph, self.edge_states))

    @property
    def vertex_count(self):
        return self.graph.vertex_count

    def slots(self, v):
        """Hilbert-space slots of vertex v: [(edge index, party position, dim)] in edge order."""
        if self._slots is None:
            sl = [[] for _ in range(self.graph.vertex_count)]
            for n, (e, t) in enumerate(zip(self.graph.edges, self.edge_states)):
                for j, u in enumerate(e):
                    sl[u].append((n, j, t.dims[j]))
            self._slots = sl
        return self._slots[v]

    @property
    def vertex_dims(self):
        out = []
        for v in range(self.graph.vertex_count):
            d = 1
            for _, _, k in self.slots(v):
                d *= k
            out.append(d)
        return tuple(out)

    def estimated_terms(self):
        n = 1
        for t in self.edge_states:
            n *= t.nnz
        return n

    def with_edge(self, edge, state):
        return EntanglementStructure(Hypergraph(self.graph.vertex_count, self.graph.edges + (tuple(edge),)),
                                     self.edge_states + (state,))


def as_structure(x):
    """Structures pass through; a k-party Tensor becomes a single edge on k vertices."""
    if isinstance(x, EntanglementStructure):
        return x
    if isinstance(x, Tensor):
        return EntanglementStructure(Hypergraph(x.party_count, [tuple(range(x.party_count))]), [x])
    raise TypeError(f"expected EntanglementStructure or Tensor, got {type(x).__name__}")


def uniform_structure(graph: Hypergraph, state: Tensor):
    return EntanglementStructure(graph, [state] * graph.edge_count)


def materialize(s, cap: int = MATERIALIZE_CAP) -> Tensor:
    """Regroup the edge tensors by vertex: one party per vertex."""
    if isinstance(s, Tensor):
        return s
    est = s.estimated_terms()
    if est > cap:
        raise MaterializationError(f"structure too large to materialize: {est} terms exceed the cap of {cap}")
    V = s.graph.vertex_count
    dims = [1] * V
    terms = {(0,) * V: Fraction(1)}
    for e, t in zip(s.graph.edges, s.edge_states):
        new = {}
        items = list(t.items())
        for idx, v in terms.items():
            for eidx, w in items:
                k = list(idx)
                for u, i, d in zip(e, eidx, t.dims):
                    k[u] = k[u] * d + i
                new[tuple(k)] = v * w
        for u, d in zip(e, t.dims):
            dims[u] *= d
        terms = new
    return Tensor._raw(tuple(dims), terms)


class LocalMapFamily:
    """One rational Matrix per vertex."""

    __slots__ = ("maps",)

    def __init__(self, maps):
        maps = tuple(maps)
        for v, m in enumerate(maps):
            if not isinstance(m, Matrix):
                raise TypeError(f"map {v} is not a Matrix")
        self.maps = maps

    def __len__(self):
        return len(self.maps)

    def __getitem__(self, v):
        return self.maps[v]

    def __iter__(self):
        return iter(self.maps)

    def __eq__(self, other):
        return isinstance(other, LocalMapFamily) and self.maps == other.maps

    @property
    def target_dims(self):
        return tuple(m.rows for m in self.maps)

    @property
    def source_dims(self):
        return tuple(m.cols for m in self.maps)

    @classmethod
    def identity(cls, dims):
        return cls([Matrix.identity(d) for d in dims])

    def compose(self, other):
        """self after other."""
        return LocalMapFamily([a @ b for a, b in zip(self.maps, other.maps)])

    def __repr__(self):
        return f"LocalMapFamily({[m.shape for m in self.maps]})"


class PolyMapFamily:
    """One eps-polynomial matrix per vertex."""

    __slots__ = ("maps",)

    def __init__(self, maps):
        self.maps = tuple(PolyMatrix.coerce(m) for m in maps)

    def __len__(self):
        return len(self.maps)

    def __getitem__(self, v):
        return self.maps[v]

    def __iter__(self):
        return iter(self.maps)

    @property
    def target_dims(self):
        return tuple(m.rows for m in self.maps)

    @property
    def source_dims(self):
        return tuple(m.cols for m in self.maps)

    def evaluate(self, q) -> LocalMapFamily:
        return LocalMapFamily([m.evaluate(q) for m in self.maps])

    def degree(self):
        return max((m.degree() or 0) for m in self.maps)

    def __repr__(self):
        return f"PolyMapFamily({[m.shape for m in self.maps]}, degree={self.degree()})"


class VerificationResult:
    """Truthy iff verified.  ``diffs`` lists up to 10 (index, got, expected)."""

    def __init__(self, ok, diffs=(), message="", **info):
        self.ok = bool(ok)
        self.diffs = list(diffs)
        self.message = message
        self.info = info

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"VerificationResult(ok={self.ok}, {self.message or ''}{', diffs=' + str(self.diffs) if self.diffs else ''})"

    def to_json(self):
        doc = {"verified": self.ok}
        if self.message:
            doc["message"] = self.message
        if self.diffs:
            doc["diffs"] = [{"idx": list(i), "got": str(a), "expected": str(b)} for i, a, b in self.diffs]
        for k, v in self.info.items():
            doc[k] = v
        return doc


def tensor_diff(got: Tensor, expected: Tensor, limit=10):
    out = []
    keys = set(got.terms) | set(expected.terms)
    for k in sorted(keys):
        a, b = got.coefficient(k), expected.coefficient(k)
        if a != b:
            out.append((k, a, b))
            if len(out) >= limit:
                break
    return out


def _check_dims(src_dims, maps, dst_dims):
    if len(maps) != len(src_dims):
        raise ValueError(f"{len(maps)} maps for {len(src_dims)} vertices")
    for v, (m, d) in enumerate(zip(maps, src_dims)):
        if m.cols != d:
            raise ValueError(f"dimension mismatch at vertex {v}: map has {m.cols} columns, vertex dimension is {d}")
    if dst_dims is not None:
        if len(dst_dims) != len(maps):
            raise ValueError(f"target has {len(dst_dims)} vertices, maps cover {len(maps)}")
        for v, (m, d) in enumerate(zip(maps, dst_dims)):
            if m.rows != d:
                raise ValueError(f"dimension mismatch at vertex {v}: map has {m.rows} rows, target dimension is {d}")


def _dims_of(x):
    return x.dims if isinstance(x, Tensor) else x.vertex_dims


def verify_restriction(src, dst, maps, cap: int = MATERIALIZE_CAP) -> VerificationResult:
    maps = maps if isinstance(maps, LocalMapFamily) else LocalMapFamily(maps)
    _check_dims(_dims_of(src), maps.maps, _dims_of(dst))
    a = materialize(src, cap)
    b = materialize(dst, cap)
    image = apply_local_maps(a, maps.maps)
    if image == b:
        return VerificationResult(True, source_terms=a.nnz, target_terms=b.nnz)
    return VerificationResult(False, tensor_diff(image, b), "image differs from target",
                              source_terms=a.nnz, target_terms=b.nnz)


def verify_degeneration(src, dst, polymaps, cap: int = MATERIALIZE_CAP) -> VerificationResult:
    """On success ``info`` holds d (leading eps-degree) and e (tail length)."""
    polymaps = polymaps if isinstance(polymaps, PolyMapFamily) else PolyMapFamily(polymaps)
    _check_dims(_dims_of(src), polymaps.maps, _dims_of(dst))
    a = materialize(src, cap)
    b = materialize(dst, cap)
    full = poly_apply(a, polymaps.maps)
    if full.is_zero():
        return VerificationResult(False, message="null degeneration: the image is identically zero")
    d = full.min_degree()
    lead = full.coefficient(d)
    e = full.max_degree() - d
    if lead != b:
        return VerificationResult(False, tensor_diff(lead, b), f"leading term at degree {d} differs from target",
                                  d=d, e=e)
    return VerificationResult(True, d=d, e=e, source_terms=a.nnz, target_terms=b.nnz)


def is_concise(t: Tensor) -> bool:
    if t.is_zero():
        return False
    if t.party_count == 0:
        return True
    if t.party_count == 1:
        # the reduced state of a single party is pure: rank 1
        return t.dims[0] == 1
    return all(matrix_rank(flatten(t, {p})) == t.dims[p] for p in range(t.party_count))


# -- folding ----------------------------------------------------------------

def _as_folding(s, folding):
    if isinstance(folding, Folding):
        if folding.source.vertex_count != s.graph.vertex_count:
            raise ValueError("folding source has a different vertex count")
        return folding.vertex_map
    return tuple(int(x) for x in folding)


def fold_structure(s, folding, drop_internal: bool = False):
    """Same edge tensors, parties regrouped along the folded vertices.

    Parties of an edge landing on the same folded vertex are grouped in their
    edge order; with ``drop_internal`` edges that collapse onto a single vertex
    are discarded (they are local states and do not affect any restriction).
    """
    s = as_structure(s)
    vm = _as_folding(s, folding)
    folded_graph, f = fold(s.graph, vm)
    edges, states = [], []
    for e, t in zip(s.graph.edges, s.edge_states):
        img = f.image_edge(e)
        if drop_internal and len(img) == 1:
            continue
        groups = [[j for j, u in enumerate(e) if vm[u] == w] for w in img]
        edges.append(img)
        states.append(t.group(groups))
    if not edges:
        raise ValueError("every edge is internal; nothing left after dropping")
    return EntanglementStructure(Hypergraph(folded_graph.vertex_count, edges), states)


def _slot_permutation(s, vm, w):
    """Permutation taking vertex w's natural order (preimage vertices ascending,
    each in its own slot order) to the folded structure's slot order.

    Returns (dims list in natural order, perm) with perm[natural position] =
    folded position for every slot (n, j).
    """
    natural = []
    for v in sorted(u for u, x in enumerate(vm) if x == w):
        natural.extend((n, j, d) for n, j, d in s.slots(v))
    folded = []
    for n, e in enumerate(s.graph.edges):
        for j, u in enumerate(e):
            if vm[u] == w:
                folded.append((n, j, s.edge_states[n].dims[j]))
    pos = {(n, j): i for i, (n, j, _) in enumerate(folded)}
    return [d for _, _, d in natural], [pos[(n, j)] for n, j, _ in natural]


def slot_permutation_matrix(dims, perm):
    """Matrix sending |i_0 ... i_{m-1}> (natural order) to the permuted order."""
    m = len(dims)
    new_dims = [0] * m
    for a, b in enumerate(perm):
        new_dims[b] = dims[a]
    total = 1
    for d in dims:
        total *= d
    data = {}
    for col in range(total):
        digits = []
        x = col
        for d in reversed(dims):
            digits.append(x % d)
            x //= d
        digits.reverse()
        out = [0] * m
        for a, b in enumerate(perm):
            out[b] = digits[a]
        row = 0
        for i, d in zip(out, new_dims):
            row = row * d + i
        data[(row, col)] = Fraction(1)
    return Matrix._raw(total, total, data)


def push_maps_through_folding(maps, folding, src, dst):
    """Folded family (tensor product over each preimage, slots realigned).

    ``src`` and ``dst`` are the unfolded structures (or tensors); they fix the
    slot orders on both sides.  Works for LocalMapFamily and PolyMapFamily.
    """
    src, dst = as_structure(src), as_structure(dst)
    vm = _as_folding(src, folding)
    poly = isinstance(maps, PolyMapFamily)
    ms = list(maps.maps if hasattr(maps, "maps") else maps)
    t = max(vm) + 1
    out = []
    for w in range(t):
        pre = sorted(u for u, x in enumerate(vm) if x == w)
        block = (poly_kron_all if poly else kron_all)([ms[u] for u in pre])
        sd, sp = _slot_permutation(src, vm, w)
        dd, dp = _slot_permutation(dst, vm, w)
        p_src = slot_permutation_matrix(sd, sp)
        p_dst = slot_permutation_matrix(dd, dp)
        if poly:
            out.append(PolyMatrix.from_matrix(p_dst) @ block @ PolyMatrix.from_matrix(p_src.T))
        else:
            out.append(p_dst @ block @ p_src.T)
    return PolyMapFamily(out) if poly else LocalMapFamily(out)


def merge_parallel_edges(s, order: str = "sorted"):
    """Kronecker-merge edges with the same vertex set.

    Parties of each edge are first aligned to a common vertex order (ascending
    ids with ``order='sorted'``, else the first occurrence's order).  The merged
    edge sits at the position of the first occurrence.  Pairing follows kron:
    the earlier edge is the major index at every vertex.
    """
    s = as_structure(s)
    groups = {}
    keys = []
    for n, e in enumerate(s.graph.edges):
        k = frozenset(e)
        if k not in groups:
            groups[k] = []
            keys.append(k)
        groups[k].append(n)
    edges, states = [], []
    for k in keys:
        first = s.graph.edges[groups[k][0]]
        target = tuple(sorted(first)) if order == "sorted" else first
        acc = None
        for n in groups[k]:
            e = s.graph.edges[n]
            t = s.edge_states[n].permute([e.index(u) for u in target])
            acc = t if acc is None else kron(acc, t)
        edges.append(target)
        states.append(acc)
    return EntanglementStructure(Hypergraph(s.graph.vertex_count, edges), states)
