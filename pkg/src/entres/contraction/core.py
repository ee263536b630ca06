"""Exact sparse tensor-network contraction: every edge state and every vertex covector is a node
with labelled legs, and nodes are merged pairwise by a hash join on their shared legs."""
from dataclasses import dataclass, field
from fractions import Fraction

from ..tensor_core import to_rational
from ..structure import EntanglementStructure, materialize, MATERIALIZE_CAP


class CovectorAssignment:
    """One rational row vector per vertex, of length dim(H_v)."""

    def __init__(self, vectors):
        self.vectors = tuple(tuple(to_rational(c) for c in v) for v in vectors)

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, v):
        return self.vectors[v]

    def check(self, s: EntanglementStructure):
        dims = s.vertex_dims
        if len(self.vectors) != len(dims):
            raise ValueError(f"{len(self.vectors)} covectors for {len(dims)} vertices")
        for v, (x, d) in enumerate(zip(self.vectors, dims)):
            if len(x) != d:
                raise ValueError(f"dimension mismatch at vertex {v}: covector length {len(x)}, vertex dimension {d}")
        return self

    def apply_maps(self, maps):
        """Covectors T_v M_v, for pulling an assignment back along a restriction."""
        out = []
        for x, m in zip(self.vectors, maps):
            if len(x) != m.rows:
                raise ValueError("covector length does not match the map's target dimension")
            row = [Fraction(0)] * m.cols
            for (i, j), c in m.items():
                if x[i]:
                    row[j] += x[i] * c
            out.append(row)
        return CovectorAssignment(out)

    def to_json(self):
        return {"covectors": [[str(c) for c in x] for x in self.vectors]}

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, dict):
            if "covectors" not in doc:
                raise ValueError("covector document needs a 'covectors' list")
            doc = doc["covectors"]
        return cls(doc)


class _Node:
    __slots__ = ("legs", "dims", "terms")

    def __init__(self, legs, dims, terms):
        self.legs = tuple(legs)
        self.dims = tuple(dims)
        self.terms = terms


def _nodes(s: EntanglementStructure, a: CovectorAssignment):
    """Edge nodes first (edge order), then one covector node per vertex.  Leg label (v, k) is
    the k-th slot of vertex v."""
    slot_of = {}
    for v in range(s.vertex_count):
        for k, (n, j, _) in enumerate(s.slots(v)):
            slot_of[(n, j)] = (v, k)
    nodes = []
    for n, (e, t) in enumerate(zip(s.graph.edges, s.edge_states)):
        nodes.append(_Node([slot_of[(n, j)] for j in range(len(e))], t.dims, dict(t.items())))
    for v in range(s.vertex_count):
        sl = s.slots(v)
        dims = [d for _, _, d in sl]
        terms = {}
        for col, c in enumerate(a[v]):
            if not c:
                continue
            idx = []
            x = col
            for d in reversed(dims):
                idx.append(x % d)
                x //= d
            terms[tuple(reversed(idx))] = c
        nodes.append(_Node([(v, k) for k in range(len(sl))], dims, terms))
    return nodes


def _merge(a: _Node, b: _Node) -> _Node:
    shared = [l for l in a.legs if l in b.legs]
    ia = [a.legs.index(l) for l in shared]
    ib = [b.legs.index(l) for l in shared]
    ra = [i for i, l in enumerate(a.legs) if l not in shared]
    rb = [i for i, l in enumerate(b.legs) if l not in shared]
    index = {}
    for idx, v in b.terms.items():
        index.setdefault(tuple(idx[i] for i in ib), []).append((tuple(idx[i] for i in rb), v))
    out = {}
    for idx, v in a.terms.items():
        hits = index.get(tuple(idx[i] for i in ia))
        if not hits:
            continue
        left = tuple(idx[i] for i in ra)
        for right, w in hits:
            key = left + right
            x = out.get(key, 0) + v * w
            if x:
                out[key] = x
            else:
                out.pop(key, None)
    legs = [a.legs[i] for i in ra] + [b.legs[i] for i in rb]
    dims = [a.dims[i] for i in ra] + [b.dims[i] for i in rb]
    return _Node(legs, dims, out)


@dataclass
class ContractionPlan:
    """steps: pairs of node ids; ids 0..E-1 are edges, E..E+V-1 covectors, then one new id per step."""
    steps: list
    node_count: int
    peak_estimate: float = 0.0
    kind: str = "custom"
    estimates: list = field(default_factory=list)

    def validate(self):
        alive = set(range(self.node_count))
        nxt = self.node_count
        for n, (i, j) in enumerate(self.steps):
            if i == j or i not in alive or j not in alive:
                raise ValueError(f"plan step {n} uses an unavailable node ({i}, {j})")
            alive -= {i, j}
            alive.add(nxt)
            nxt += 1
        if len(alive) != 1:
            raise ValueError(f"plan leaves {len(alive)} nodes uncontracted")
        return self

    def to_json(self):
        return {"kind": self.kind, "nodes": self.node_count, "steps": [list(s) for s in self.steps],
                "peak_estimate": self.peak_estimate}


def _shape(s: EntanglementStructure, a=None):
    """(legs, dims, nnz estimate) per initial node, without building terms."""
    out = []
    slot_of = {}
    for v in range(s.vertex_count):
        for k, (n, j, _) in enumerate(s.slots(v)):
            slot_of[(n, j)] = (v, k)
    for n, (e, t) in enumerate(zip(s.graph.edges, s.edge_states)):
        out.append((frozenset(slot_of[(n, j)] for j in range(len(e))), list(t.dims), t.nnz))
    for v in range(s.vertex_count):
        sl = s.slots(v)
        d = 1
        for _, _, k in sl:
            d *= k
        nnz = d if a is None else sum(1 for c in a[v] if c)
        out.append((frozenset((v, k) for k in range(len(sl))), [k for _, _, k in sl], nnz))
    return out


def greedy_order(s: EntanglementStructure, a: CovectorAssignment = None) -> ContractionPlan:
    """Repeatedly merge the pair with the smallest estimated result size
    nnz_a * nnz_b / prod(shared dims); pairs sharing a leg are preferred, ties go
    to the lowest node ids."""
    shapes = _shape(s, a)
    dim_of = {}
    for v in range(s.vertex_count):
        for k, (_, _, d) in enumerate(s.slots(v)):
            dim_of[(v, k)] = d
    alive = {i: (legs, max(nnz, 1)) for i, (legs, _, nnz) in enumerate(shapes)}
    nxt = len(shapes)
    steps, ests = [], []
    while len(alive) > 1:
        best = None
        ids = sorted(alive)
        for x in range(len(ids)):
            for y in range(x + 1, len(ids)):
                i, j = ids[x], ids[y]
                la, na = alive[i]
                lb, nb = alive[j]
                sh = la & lb
                div = 1
                for l in sh:
                    div *= dim_of[l]
                est = na * nb / div
                key = (0 if sh else 1, est, i, j)
                if best is None or key < best[0]:
                    best = (key, i, j, (la | lb) - sh, est)
        _, i, j, legs, est = best
        cap = 1
        for l in legs:
            cap *= dim_of[l]
        est = max(1.0, min(est, float(cap)))
        del alive[i], alive[j]
        alive[nxt] = (legs, est)
        nxt += 1
        steps.append((i, j))
        ests.append(est)
    return ContractionPlan(steps, len(shapes), max(ests, default=0.0), "greedy", ests)


def naive_plan(s: EntanglementStructure) -> ContractionPlan:
    """Left fold over edges then covectors."""
    n = s.graph.edge_count + s.vertex_count
    steps = []
    acc = 0
    for i in range(1, n):
        steps.append((acc, i))
        acc = n + i - 1
    return ContractionPlan(steps, n, 0.0, "naive")


def contract(s: EntanglementStructure, a, plan=None) -> Fraction:
    """Exact value of (tensor_v T_v) |phi>_G."""
    if not isinstance(a, CovectorAssignment):
        a = CovectorAssignment(a)
    a.check(s)
    if plan is None or plan == "greedy":
        plan = greedy_order(s, a)
    elif plan == "naive":
        plan = naive_plan(s)
    plan.validate()
    nodes = dict(enumerate(_nodes(s, a)))
    if plan.node_count != len(nodes):
        raise ValueError(f"plan is for {plan.node_count} nodes, network has {len(nodes)}")
    nxt = len(nodes)
    for i, j in plan.steps:
        nodes[nxt] = _merge(nodes.pop(i), nodes.pop(j))
        nxt += 1
    (last,) = nodes.values()
    if last.legs:
        raise AssertionError("open legs left after contraction")
    return Fraction(last.terms.get((), 0))


def contract_oracle(s: EntanglementStructure, a, cap: int = MATERIALIZE_CAP) -> Fraction:
    """<covectors| materialize(s)>, for testing."""
    if not isinstance(a, CovectorAssignment):
        a = CovectorAssignment(a)
    a.check(s)
    t = materialize(s, cap)
    total = Fraction(0)
    for idx, v in t.items():
        p = v
        for u, i in enumerate(idx):
            p *= a[u][i]
            if not p:
                break
        total += p
    return total
