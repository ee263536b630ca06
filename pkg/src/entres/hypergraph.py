"""Hypergraphs, lattice generators, Berge-acyclicity and foldings.

Edge vertex order matters everywhere: it fixes which tensor party sits at
which vertex.  Orientation conventions of the generators:

* ``square_lattice``: vertex (r, c) has id r*m + c (row r counted top to
  bottom); for every vertex in id order the edge to the right neighbour is
  listed, then the edge to the neighbour below.  Each edge is (left, right)
  or (top, bottom).
* ``plaquette_square_lattice``: one 4-edge per unit cell with corners
  (bottom-left, top-left, top-right, bottom-right), a cyclic order.
* ``kagome_lattice``: unit cell (i, j) holds sites a, b, c; the up triangle
  is (a, b, c) and the down triangle hanging off b is (b_ij, c_{i-1,j+1},
  a_{i,j+1}); both are counterclockwise from the leftmost vertex.
* ``triangular_lattice``: vertex (i, j) has id i*m + j; up triangles
  ((i,j), (i,j+1), (i+1,j)), down triangles ((i,j+1), (i+1,j+1), (i+1,j)).
"""
from dataclasses import dataclass
import json


class Hypergraph:
    __slots__ = ("vertex_count", "edges")

    def __init__(self, vertex_count: int, edges):
        vertex_count = int(vertex_count)
        if vertex_count < 1:
            raise ValueError("a hypergraph needs at least one vertex")
        clean = []
        for n, e in enumerate(edges):
            e = tuple(int(v) for v in e)
            if not e:
                raise ValueError(f"edge {n} is empty")
            if len(set(e)) != len(e):
                raise ValueError(f"edge {n} {list(e)} repeats a vertex")
            if any(not 0 <= v < vertex_count for v in e):
                raise ValueError(f"edge {n} {list(e)} has a vertex outside 0..{vertex_count - 1}")
            clean.append(e)
        self.vertex_count = vertex_count
        self.edges = tuple(clean)

    def __eq__(self, other):
        return isinstance(other, Hypergraph) and self.vertex_count == other.vertex_count and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertex_count, self.edges))

    def __repr__(self):
        return f"Hypergraph({self.vertex_count}, {[list(e) for e in self.edges]})"

    @property
    def edge_count(self):
        return len(self.edges)

    def incidences(self, v):
        """(edge index, position in edge) for every edge containing v, in edge order."""
        return [(n, e.index(v)) for n, e in enumerate(self.edges) if v in e]

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def is_uniform(self, k):
        return all(len(e) == k for e in self.edges)

    def to_json(self):
        return {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, doc):
        if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
            raise ValueError("hypergraph document needs 'vertices' and 'edges'")
        return cls(doc["vertices"], doc["edges"])

    def dumps(self):
        return json.dumps(self.to_json(), separators=(",", ":"))


@dataclass(frozen=True)
class Folding:
    source: Hypergraph
    target_vertex_count: int
    vertex_map: tuple

    def __post_init__(self):
        vm = tuple(int(x) for x in self.vertex_map)
        object.__setattr__(self, "vertex_map", vm)
        if len(vm) != self.source.vertex_count:
            raise ValueError("folding map must assign every source vertex")
        if set(vm) != set(range(self.target_vertex_count)):
            raise ValueError("folding map must be surjective onto 0..t-1")

    def image_edge(self, e):
        """f(e) with duplicates collapsed, in first-occurrence order."""
        out = []
        for v in e:
            w = self.vertex_map[v]
            if w not in out:
                out.append(w)
        return tuple(out)

    @property
    def induced_edges(self):
        return tuple(self.image_edge(e) for e in self.source.edges)

    def preimage(self, w):
        return [v for v, x in enumerate(self.vertex_map) if x == w]

    def to_json(self):
        return {"map": list(self.vertex_map)}


# -- generators -------------------------------------------------------------

def square_lattice(n: int, m: int, periodic: bool = False) -> Hypergraph:
    if n < 2 or m < 2:
        raise ValueError("square lattice needs n, m >= 2")
    edges = []
    for r in range(n):
        for c in range(m):
            v = r * m + c
            if c + 1 < m:
                edges.append((v, v + 1))
            elif periodic:
                edges.append((v, r * m))
            if r + 1 < n:
                edges.append((v, v + m))
            elif periodic:
                edges.append((v, c))
    return Hypergraph(n * m, edges)


def square_lattice_directions(n: int, m: int, periodic: bool = False):
    """For square_lattice(n, m, periodic): per edge, 'h' or 'v'."""
    out = []
    for r in range(n):
        for c in range(m):
            if c + 1 < m or periodic:
                out.append("h")
            if r + 1 < n or periodic:
                out.append("v")
    return out


def plaquette_square_lattice(n: int, m: int, periodic: bool = False) -> Hypergraph:
    if n < 2 or m < 2:
        raise ValueError("plaquette lattice needs n, m >= 2")
    cells_r = n if periodic else n - 1
    cells_c = m if periodic else m - 1
    edges = []
    for r in range(cells_r):
        for c in range(cells_c):
            r2, c2 = (r + 1) % n, (c + 1) % m
            tl, tr = r * m + c, r * m + c2
            bl, br = r2 * m + c, r2 * m + c2
            edges.append((bl, tl, tr, br))
    return Hypergraph(n * m, edges)


def kagome_lattice(rows: int, cols: int, boundary: str = "open", down_triangles: bool = True) -> Hypergraph:
    """Corner-sharing triangles, two per unit cell.

    With ``boundary='open'`` every cell contributes its up triangle and the
    down triangle hanging off its b site; sites are created as needed, so
    (1, 1) is the smallest two-triangle patch.  ``down_triangles=False`` keeps
    only up triangles (a single triangle for (1, 1)).
    """
    if boundary not in ("open", "periodic"):
        raise ValueError("boundary must be 'open' or 'periodic'")
    if rows < 1 or cols < 1:
        raise ValueError("kagome lattice needs rows, cols >= 1")
    if boundary == "periodic" and (rows < 2 or cols < 2):
        raise ValueError("periodic kagome lattice needs rows, cols >= 2")
    ids = {}

    def site(i, j, s):
        if boundary == "periodic":
            i, j = i % rows, j % cols
            return 3 * (i * cols + j) + s
        key = (i, j, s)
        if key not in ids:
            ids[key] = len(ids)
        return ids[key]

    edges = []
    for i in range(rows):
        for j in range(cols):
            edges.append((site(i, j, 0), site(i, j, 1), site(i, j, 2)))
            if down_triangles:
                edges.append((site(i, j, 1), site(i - 1, j + 1, 2), site(i, j + 1, 0)))
    count = 3 * rows * cols if boundary == "periodic" else len(ids)
    return Hypergraph(count, edges)


def kagome_site_kinds(rows, cols, boundary="open", down_triangles=True):
    """Per vertex of kagome_lattice(...): (cell index, site letter 'a'|'b'|'c')."""
    g = kagome_lattice(rows, cols, boundary, down_triangles)
    kinds = [None] * g.vertex_count
    letters = "abc"
    for n, e in enumerate(g.edges):
        if down_triangles:
            cell, up = divmod(n, 2)
        else:
            cell, up = n, 0
        if up == 0:
            for v, s in zip(e, letters):
                kinds[v] = kinds[v] or (cell, s)
        else:
            b, c, a = e
            for v, s in ((b, "b"), (c, "c"), (a, "a")):
                if kinds[v] is None:
                    kinds[v] = (None, s)
    return kinds


def triangular_lattice(n: int, m: int, periodic: bool = True, half_filled: bool = False) -> Hypergraph:
    """Triangular lattice; ``half_filled`` keeps only the up triangles."""
    if n < 2 or m < 2:
        raise ValueError("triangular lattice needs n, m >= 2")
    if periodic and (n < 3 or m < 3):
        raise ValueError("periodic triangular lattice needs n, m >= 3")
    edges = []
    rng_i = range(n) if periodic else range(n - 1)
    rng_j = range(m) if periodic else range(m - 1)
    for i in rng_i:
        for j in rng_j:
            i2, j2 = (i + 1) % n, (j + 1) % m
            edges.append((i * m + j, i * m + j2, i2 * m + j))
            if not half_filled:
                edges.append((i * m + j2, i2 * m + j2, i2 * m + j))
    return Hypergraph(n * m, edges)


def fan(m: int) -> Hypergraph:
    """Vertices A=0, B=1, C_i=2+i; edges (A, B, C_i)."""
    if m < 1:
        raise ValueError("fan(m) needs m >= 1")
    return Hypergraph(m + 2, [(0, 1, 2 + i) for i in range(m)])


def single_edge(k: int) -> Hypergraph:
    return Hypergraph(k, [tuple(range(k))])


# -- acyclicity -------------------------------------------------------------

def is_acyclic(g: Hypergraph) -> bool:
    """Berge-acyclic: incidence graph is a forest and no two edges share >= 2 vertices."""
    edges = g.edges
    for a in range(len(edges)):
        sa = set(edges[a])
        for b in range(a + 1, len(edges)):
            if len(sa.intersection(edges[b])) >= 2:
                return False
    # union-find over vertices 0..V-1 and edge nodes V..V+E-1
    parent = list(range(g.vertex_count + len(edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for n, e in enumerate(edges):
        en = g.vertex_count + n
        for v in e:
            ra, rb = find(en), find(v)
            if ra == rb:
                return False
            parent[ra] = rb
    return True


# -- folding ----------------------------------------------------------------

def fold(g: Hypergraph, vertex_map):
    vm = tuple(int(x) for x in vertex_map)
    if len(vm) != g.vertex_count:
        raise ValueError("folding map must assign every vertex")
    t = max(vm) + 1 if vm else 0
    if set(vm) != set(range(t)):
        raise ValueError("folding map is not surjective onto 0..t-1")
    f = Folding(g, t, vm)
    return Hypergraph(t, f.induced_edges), f


def compose_maps(f_map, g_map):
    """Vertex map of g after f."""
    return tuple(g_map[x] for x in f_map)


def all_bipartition_foldings(g: Hypergraph, max_count: int = 1 << 15):
    """Foldings onto 2 vertices, in binary-counting order.

    Code c = 1 .. 2^(V-1)-1 sends vertex v to bit v of c; the last vertex always
    stays on side 0, so every unordered bipartition appears once.
    """
    n = g.vertex_count
    out = []
    if n < 2:
        return out
    for code in range(1, 1 << (n - 1)):
        if len(out) >= max_count:
            break
        vm = tuple((code >> v) & 1 for v in range(n))
        out.append(Folding(g, 2, vm))
    return out


def bipartition_sides(folding: Folding):
    return [v for v, x in enumerate(folding.vertex_map) if x == 1]


def kagome_fan_folding(rows: int, cols: int, boundary: str = "periodic"):
    """Fold kagome_lattice(rows, cols, boundary) onto fan(rows*cols).

    a sites -> A, c sites -> B, the b site of cell k -> C_k.  Every fan edge
    then carries the up and the down triangle of one cell.
    """
    g = kagome_lattice(rows, cols, boundary)
    vm = [None] * g.vertex_count
    for n, e in enumerate(g.edges):
        cell, down = divmod(n, 2)
        if down == 0:
            a, b, c = e
        else:
            b, c, a = e
        for v, t in ((a, 0), (c, 1), (b, 2 + cell)):
            if vm[v] is not None and vm[v] != t:
                raise AssertionError("inconsistent kagome fan labelling")
            vm[v] = t
    return g, fold(g, vm)


def triangular_fan_folding(n: int, m: int):
    """Fold the periodic triangular lattice onto a fan via its 3-colouring.

    Colour (i + 2j) mod 3 needs n, m divisible by 3.  Colour 0 -> A, colour 1
    -> B, each colour-2 vertex -> its own C_k; every fan edge collects the six
    triangles around one colour-2 vertex.
    """
    if n % 3 or m % 3:
        raise ValueError("the 3-colouring needs n and m divisible by 3")
    g = triangular_lattice(n, m, periodic=True)
    vm = []
    k = 0
    for i in range(n):
        for j in range(m):
            col = (i + 2 * j) % 3
            if col == 2:
                vm.append(2 + k)
                k += 1
            else:
                vm.append(col)
    return g, fold(g, vm)
