"""Polynomials in the degeneration parameter eps, and eps-polynomial matrices/tensors."""
from fractions import Fraction
from types import MappingProxyType

from .matrix import Matrix
from .rational import to_rational
from .tensor import Tensor


def _padd(a, b):
    out = dict(a)
    for d, v in b.items():
        s = out.get(d, 0) + v
        if s:
            out[d] = s
        else:
            out.pop(d, None)
    return out


def _pmul(a, b):
    out = {}
    for d1, v1 in a.items():
        for d2, v2 in b.items():
            d = d1 + d2
            s = out.get(d, 0) + v1 * v2
            if s:
                out[d] = s
            else:
                out.pop(d, None)
    return out


class EpsPoly:
    """sum_d c_d eps^d with rational c_d; zero coefficients are never stored."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs is None:
            pass
        elif isinstance(coeffs, EpsPoly):
            c = dict(coeffs._c)
        elif hasattr(coeffs, "items"):
            for d, v in coeffs.items():
                d = int(d)
                if d < 0:
                    raise ValueError("negative eps-degree")
                v = to_rational(v)
                s = c.get(d, 0) + v
                if s:
                    c[d] = s
                else:
                    c.pop(d, None)
        else:
            v = to_rational(coeffs)
            if v:
                c[0] = v
        self._c = c

    @classmethod
    def _raw(cls, c):
        p = object.__new__(cls)
        p._c = c
        return p

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, EpsPoly) else cls(x)

    @property
    def coeffs(self):
        return MappingProxyType(self._c)

    def is_zero(self):
        return not self._c

    def min_degree(self):
        return min(self._c) if self._c else None

    def degree(self):
        return max(self._c) if self._c else None

    def coefficient(self, d):
        return self._c.get(d, Fraction(0))

    def evaluate(self, q):
        q = to_rational(q)
        return sum((v * q ** d for d, v in self._c.items()), Fraction(0))

    def __add__(self, other):
        return EpsPoly._raw(_padd(self._c, EpsPoly.coerce(other)._c))

    __radd__ = __add__

    def __neg__(self):
        return EpsPoly._raw({d: -v for d, v in self._c.items()})

    def __sub__(self, other):
        return self + (-EpsPoly.coerce(other))

    def __rsub__(self, other):
        return EpsPoly.coerce(other) - self

    def __mul__(self, other):
        return EpsPoly._raw(_pmul(self._c, EpsPoly.coerce(other)._c))

    __rmul__ = __mul__

    def __pow__(self, n):
        out = EpsPoly(1)
        for _ in range(int(n)):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = EpsPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        if not self._c:
            return "EpsPoly(0)"
        parts = []
        for d in sorted(self._c):
            v = self._c[d]
            parts.append(f"{v}" if d == 0 else f"{v}*eps^{d}")
        return "EpsPoly(" + " + ".join(parts) + ")"

    def to_json(self):
        return {str(d): str(self._c[d]) for d in sorted(self._c)}

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, dict):
            return cls({int(k): Fraction(str(v)) for k, v in doc.items()})
        return cls(Fraction(str(doc)))


EPS = EpsPoly({1: 1})


class PolyMatrix:
    """Matrix with EpsPoly entries, stored sparsely as {(i,j): {deg: Fraction}}."""

    __slots__ = ("rows", "cols", "_data", "_by_col")

    def __init__(self, rows, cols, data=None):
        self.rows, self.cols = int(rows), int(cols)
        clean = {}
        if data:
            for (i, j), v in (data.items() if hasattr(data, "items") else data):
                i, j = int(i), int(j)
                if not (0 <= i < self.rows and 0 <= j < self.cols):
                    raise ValueError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
                p = EpsPoly.coerce(v)._c
                s = _padd(clean.get((i, j), {}), p)
                if s:
                    clean[(i, j)] = s
                else:
                    clean.pop((i, j), None)
        self._data = clean
        self._by_col = None

    @classmethod
    def _raw(cls, rows, cols, data):
        m = object.__new__(cls)
        m.rows, m.cols, m._data = rows, cols, data
        m._by_col = None
        return m

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        data = {}
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(r):
                p = EpsPoly.coerce(v)
                if not p.is_zero():
                    data[(i, j)] = dict(p._c)
        return cls._raw(len(rows), ncols, data)

    @classmethod
    def from_matrix(cls, m: Matrix):
        return cls._raw(m.rows, m.cols, {k: {0: v} for k, v in m.items()})

    @classmethod
    def coerce(cls, m):
        if isinstance(m, PolyMatrix):
            return m
        if isinstance(m, Matrix):
            return cls.from_matrix(m)
        raise TypeError(f"expected Matrix or PolyMatrix, got {type(m).__name__}")

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return len(self._data)

    def __getitem__(self, key):
        return EpsPoly._raw(dict(self._data.get(tuple(key), {})))

    def items(self):
        for k, v in self._data.items():
            yield k, EpsPoly._raw(dict(v))

    def raw_items(self):
        return self._data.items()

    def column_map(self):
        if self._by_col is None:
            by = {}
            for (i, j), v in self._data.items():
                by.setdefault(j, []).append((i, v))
            self._by_col = {j: tuple(sorted(e, key=lambda t: t[0])) for j, e in by.items()}
        return self._by_col

    def degree(self):
        return max((max(v) for v in self._data.values()), default=None)

    def min_degree(self):
        return min((min(v) for v in self._data.values()), default=None)

    def evaluate(self, q) -> Matrix:
        q = to_rational(q)
        out = {}
        for k, v in self._data.items():
            s = sum((c * q ** d for d, c in v.items()), Fraction(0))
            if s:
                out[k] = s
        return Matrix._raw(self.rows, self.cols, out)

    def coefficient(self, d) -> Matrix:
        return Matrix._raw(self.rows, self.cols, {k: v[d] for k, v in self._data.items() if d in v})

    def __matmul__(self, other):
        other = PolyMatrix.coerce(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        right = {}
        for (k, j), v in other._data.items():
            right.setdefault(k, []).append((j, v))
        out = {}
        for (i, k), v in self._data.items():
            for j, w in right.get(k, ()):
                s = _padd(out.get((i, j), {}), _pmul(v, w))
                if s:
                    out[(i, j)] = s
                else:
                    out.pop((i, j), None)
        return PolyMatrix._raw(self.rows, other.cols, out)

    def __rmatmul__(self, other):
        return PolyMatrix.coerce(other) @ self

    def kron(self, other):
        other = PolyMatrix.coerce(other)
        out = {}
        for (i, j), v in self._data.items():
            for (k, l), w in other._data.items():
                out[(i * other.rows + k, j * other.cols + l)] = _pmul(v, w)
        return PolyMatrix._raw(self.rows * other.rows, self.cols * other.cols, out)

    def scale(self, c):
        c = EpsPoly.coerce(c)._c
        out = {}
        for k, v in self._data.items():
            p = _pmul(v, c)
            if p:
                out[k] = p
        return PolyMatrix._raw(self.rows, self.cols, out)

    def __eq__(self, other):
        if isinstance(other, Matrix):
            other = PolyMatrix.from_matrix(other)
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols}, nnz={self.nnz}, degree={self.degree()})"


def poly_kron_all(mats):
    mats = [PolyMatrix.coerce(m) for m in mats]
    out = mats[0]
    for m in mats[1:]:
        out = out.kron(m)
    return out


class PolyTensor:
    """Tensor with EpsPoly coefficients: {idx: {deg: Fraction}}."""

    __slots__ = ("_dims", "_terms")

    def __init__(self, dims, terms=None):
        self._dims = tuple(int(d) for d in dims)
        clean = {}
        for idx, v in (terms or {}).items():
            p = EpsPoly.coerce(v)._c
            if p:
                clean[tuple(idx)] = dict(p)
        self._terms = clean

    @classmethod
    def _raw(cls, dims, terms):
        t = object.__new__(cls)
        t._dims = tuple(dims)
        t._terms = terms
        return t

    @classmethod
    def from_tensor(cls, t: Tensor):
        return cls._raw(t.dims, {k: {0: v} for k, v in t.items()})

    @property
    def dims(self):
        return self._dims

    @property
    def party_count(self):
        return len(self._dims)

    @property
    def nnz(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def raw_items(self):
        return self._terms.items()

    def items(self):
        for k, v in self._terms.items():
            yield k, EpsPoly._raw(dict(v))

    def min_degree(self):
        return min((min(v) for v in self._terms.values()), default=None)

    def max_degree(self):
        return max((max(v) for v in self._terms.values()), default=None)

    def degrees(self):
        return sorted({d for v in self._terms.values() for d in v})

    def coefficient(self, d) -> Tensor:
        return Tensor._raw(self._dims, {k: v[d] for k, v in self._terms.items() if d in v})

    def evaluate(self, q) -> Tensor:
        q = to_rational(q)
        out = {}
        for k, v in self._terms.items():
            s = sum((c * q ** d for d, c in v.items()), Fraction(0))
            if s:
                out[k] = s
        return Tensor._raw(self._dims, out)

    def drop_below(self, d):
        """Terms of eps-degree >= d only."""
        out = {}
        for k, v in self._terms.items():
            w = {e: c for e, c in v.items() if e >= d}
            if w:
                out[k] = w
        return PolyTensor._raw(self._dims, out)

    def __eq__(self, other):
        if isinstance(other, Tensor):
            other = PolyTensor.from_tensor(other)
        if not isinstance(other, PolyTensor):
            return NotImplemented
        return self._dims == other._dims and self._terms == other._terms

    def __repr__(self):
        return f"PolyTensor(dims={list(self._dims)}, nnz={self.nnz}, degrees={self.degrees()})"
