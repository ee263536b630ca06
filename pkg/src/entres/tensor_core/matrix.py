"""Exact rational matrices and exact rank.

Matrices are stored sparsely (dict of nonzero entries) because local maps in
lattice constructions are huge but mostly zero; ``to_lists`` gives the dense
view.
"""
from fractions import Fraction
from math import gcd
from types import MappingProxyType

from .rational import to_rational, lcm

# 2**61 - 1, used only for the full-rank shortcut in matrix_rank
MERSENNE_61 = (1 << 61) - 1


class Matrix:
    __slots__ = ("rows", "cols", "_data", "_by_col", "_hash")

    def __init__(self, rows, cols, data=None):
        rows, cols = int(rows), int(cols)
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        clean = {}
        if data:
            for (i, j), v in (data.items() if hasattr(data, "items") else data):
                i, j = int(i), int(j)
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ValueError(f"entry ({i},{j}) outside {rows}x{cols}")
                v = to_rational(v)
                s = clean.get((i, j), 0) + v
                if s:
                    clean[(i, j)] = s
                else:
                    clean.pop((i, j), None)
        self.rows = rows
        self.cols = cols
        self._data = clean
        self._by_col = None
        self._hash = None

    @classmethod
    def _raw(cls, rows, cols, data):
        m = object.__new__(cls)
        m.rows, m.cols, m._data = rows, cols, data
        m._by_col = None
        m._hash = None
        return m

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0)
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        data = {}
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                v = to_rational(v)
                if v:
                    data[(i, j)] = v
        return cls._raw(len(rows), ncols, data)

    @classmethod
    def identity(cls, n):
        return cls._raw(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def zeros(cls, rows, cols):
        return cls._raw(rows, cols, {})

    @classmethod
    def row_vector(cls, values):
        return cls.from_rows([values])

    @classmethod
    def column_vector(cls, values):
        return cls.from_rows([[v] for v in values])

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return len(self._data)

    @property
    def entries(self):
        return MappingProxyType(self._data)

    def items(self):
        return self._data.items()

    def __getitem__(self, key):
        i, j = key
        return self._data.get((i, j), Fraction(0))

    def to_lists(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._data.items():
            out[i][j] = v
        return out

    def column_map(self):
        """dict col -> tuple of (row, value); cached."""
        if self._by_col is None:
            by = {}
            for (i, j), v in self._data.items():
                by.setdefault(j, []).append((i, v))
            self._by_col = {j: tuple(sorted(e)) for j, e in by.items()}
        return self._by_col

    def row_map(self):
        by = {}
        for (i, j), v in self._data.items():
            by.setdefault(i, {})[j] = v
        return by

    def is_square(self):
        return self.rows == self.cols

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, frozenset(self._data.items())))
        return self._hash

    def __repr__(self):
        if self.rows * self.cols <= 36:
            return f"Matrix({[[str(x) for x in r] for r in self.to_lists()]})"
        return f"Matrix({self.rows}x{self.cols}, nnz={self.nnz})"

    @property
    def T(self):
        return Matrix._raw(self.cols, self.rows, {(j, i): v for (i, j), v in self._data.items()})

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = dict(self._data)
        for k, v in other._data.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Matrix._raw(self.rows, self.cols, out)

    def __neg__(self):
        return Matrix._raw(self.rows, self.cols, {k: -v for k, v in self._data.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = to_rational(c)
        if not c:
            return Matrix.zeros(self.rows, self.cols)
        return Matrix._raw(self.rows, self.cols, {k: v * c for k, v in self._data.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        right = other.row_map()
        out = {}
        for (i, k), v in self._data.items():
            r = right.get(k)
            if not r:
                continue
            for j, w in r.items():
                s = out.get((i, j), 0) + v * w
                if s:
                    out[(i, j)] = s
                else:
                    out.pop((i, j), None)
        return Matrix._raw(self.rows, other.cols, out)

    def kron(self, other):
        out = {}
        for (i, j), v in self._data.items():
            for (k, l), w in other._data.items():
                out[(i * other.rows + k, j * other.cols + l)] = v * w
        return Matrix._raw(self.rows * other.rows, self.cols * other.cols, out)

    def submatrix(self, rows, cols):
        rpos = {r: a for a, r in enumerate(rows)}
        cpos = {c: b for b, c in enumerate(cols)}
        out = {}
        for (i, j), v in self._data.items():
            if i in rpos and j in cpos:
                out[(rpos[i], cpos[j])] = v
        return Matrix._raw(len(rows), len(cols), out)

    def apply(self, vector):
        """Matrix times a dense list."""
        out = [Fraction(0)] * self.rows
        for (i, j), v in self._data.items():
            out[i] += v * vector[j]
        return out


def kron_all(mats):
    mats = list(mats)
    if not mats:
        return Matrix.identity(1)
    out = mats[0]
    for m in mats[1:]:
        out = out.kron(m)
    return out


# -- rank ------------------------------------------------------------------

def _integer_rows(m: Matrix):
    """Rows as {col: int}, each scaled by the lcm of its denominators."""
    rows = {}
    for (i, j), v in m.items():
        rows.setdefault(i, {})[j] = v
    out = []
    for i in sorted(rows):
        r = rows[i]
        den = 1
        for v in r.values():
            den = lcm(den, v.denominator)
        out.append({j: int(v * den) for j, v in r.items()})
    return out


def rank_mod_p(m: Matrix, p: int = MERSENNE_61) -> int:
    """Rank of the denominator-cleared integer matrix modulo the prime p.

    This never exceeds the rational rank, so it is a certified lower bound.
    """
    return _rank_mod_p_rows(_integer_rows(m), p)


def _rank_mod_p_rows(int_rows, p):
    pivots = {}
    rank = 0
    for row in int_rows:
        r = {c: v % p for c, v in row.items() if v % p}
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(r[c], p - 2, p)
                pivots[c] = {cc: vv * inv % p for cc, vv in r.items()}
                rank += 1
                break
            f = r[c]
            for cc, vv in piv.items():
                nv = (r.get(cc, 0) - f * vv) % p
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
    return rank


def _exact_rank_rows(int_rows):
    """Fraction-free sparse elimination over the integers with content removal."""
    pivots = {}
    rank = 0
    for row in int_rows:
        r = {c: v for c, v in row.items() if v}
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                g = 0
                for v in r.values():
                    g = gcd(g, v)
                pivots[c] = {cc: vv // g for cc, vv in r.items()}
                rank += 1
                break
            a, b = piv[c], r[c]
            new = {}
            for cc, vv in r.items():
                new[cc] = vv * a
            for cc, vv in piv.items():
                nv = new.get(cc, 0) - vv * b
                if nv:
                    new[cc] = nv
                else:
                    new.pop(cc, None)
            g = 0
            for v in new.values():
                g = gcd(g, v)
            r = {cc: vv // g for cc, vv in new.items()} if g > 1 else new
    return rank


def matrix_rank(m: Matrix) -> int:
    """Exact rank over the rationals.

    A rank computed modulo a large prime is a lower bound on the rational rank;
    when it already equals min(rows, cols) it is the answer.  Otherwise the
    exact fraction-free elimination decides.
    """
    if m.nnz == 0:
        return 0
    rows = _integer_rows(m)
    full = min(m.rows, m.cols)
    if _rank_mod_p_rows(rows, MERSENNE_61) == full:
        return full
    return _exact_rank_rows(rows)


def rref(m: Matrix):
    """Reduced row echelon form over Q: (dense rows, pivot columns)."""
    a = m.to_lists()
    pivots = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        p = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = Matrix.from_rows([row + [Fraction(int(i == j)) for j in range(n)]
                            for i, row in enumerate(m.to_lists())])
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return Matrix.from_rows([row[n:] for row in red[:n]])


def right_inverse(m: Matrix) -> Matrix:
    """R with m @ R = identity; m must have full row rank."""
    _, piv = rref(m)
    if len(piv) != m.rows:
        raise ValueError("matrix does not have full row rank")
    sub = m.submatrix(list(range(m.rows)), piv)
    inv = inverse(sub)
    data = {}
    for (i, j), v in inv.items():
        data[(piv[i], j)] = v
    return Matrix._raw(m.cols, m.rows, data)


def determinant(m: Matrix) -> Fraction:
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    a = m.to_lists()
    n = m.rows
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def nullspace(m: Matrix):
    """Basis of the right kernel as a list of dense Fraction lists."""
    red, piv = rref(m)
    free = [c for c in range(m.cols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, c in enumerate(piv):
            v[c] = -red[r][f]
        basis.append(v)
    return basis
