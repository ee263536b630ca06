"""Sparse exact multiparty tensors."""
import hashlib
import json
from fractions import Fraction
from itertools import product
from types import MappingProxyType

from .rational import to_rational, rational_from_strings


class Tensor:
    """A k-party tensor stored as a map multi-index -> nonzero Fraction.

    Instances are immutable.  ``dims`` is a tuple of positive ints (one per
    party); a 0-party tensor is a scalar.
    """

    __slots__ = ("_dims", "_terms", "_hash")

    def __init__(self, dims, terms=None):
        dims = tuple(int(d) for d in dims)
        for d in dims:
            if d < 1:
                raise ValueError(f"party dimensions must be positive, got {dims}")
        clean = {}
        if terms:
            items = terms.items() if hasattr(terms, "items") else terms
            k = len(dims)
            for idx, v in items:
                idx = tuple(int(i) for i in idx)
                if len(idx) != k:
                    raise ValueError(f"index {idx} has {len(idx)} components, tensor has {k} parties")
                for i, d in zip(idx, dims):
                    if not 0 <= i < d:
                        raise ValueError(f"index {idx} out of range for dims {dims}")
                v = to_rational(v)
                s = clean.get(idx, 0) + v
                if s:
                    clean[idx] = s
                else:
                    clean.pop(idx, None)
        self._dims = dims
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dims, terms):
        # internal constructor: caller guarantees clean, in-range, nonzero terms
        t = object.__new__(cls)
        t._dims = tuple(dims)
        t._terms = terms
        t._hash = None
        return t

    @classmethod
    def scalar(cls, c=1):
        c = to_rational(c)
        return cls._raw((), {(): c} if c else {})

    @classmethod
    def basis(cls, dims, idx, coeff=1):
        return cls(dims, {tuple(idx): coeff})

    @classmethod
    def vector(cls, values):
        """1-party tensor from a list of coefficients."""
        return cls((len(values),), {(i,): v for i, v in enumerate(values) if to_rational(v)})

    @classmethod
    def from_dense(cls, array):
        import numpy as np
        a = np.asarray(array, dtype=object)
        terms = {}
        for idx in product(*(range(d) for d in a.shape)):
            v = a[idx]
            if v != 0:
                terms[idx] = v
        return cls(a.shape, terms)

    @property
    def dims(self):
        return self._dims

    @property
    def party_count(self):
        return len(self._dims)

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def nnz(self):
        return len(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, idx):
        return self._terms.get(tuple(idx), Fraction(0))

    def is_zero(self):
        return not self._terms

    def sorted_items(self):
        return sorted(self._terms.items())

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self._dims == other._dims and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dims, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        shown = ", ".join(f"{list(i)}:{v}" for i, v in self.sorted_items()[:6])
        more = "" if self.nnz <= 6 else f", ... ({self.nnz} terms)"
        return f"Tensor(dims={list(self._dims)}, {{{shown}{more}}})"

    # -- arithmetic -------------------------------------------------------
    def _check_same(self, other):
        if self._dims != other._dims:
            raise ValueError(f"dimension mismatch: {self._dims} vs {other._dims}")

    def __add__(self, other):
        self._check_same(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Tensor._raw(self._dims, out)

    def __neg__(self):
        return Tensor._raw(self._dims, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = to_rational(c)
        if not c:
            return Tensor._raw(self._dims, {})
        return Tensor._raw(self._dims, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    # -- party manipulation ----------------------------------------------
    def permute(self, order):
        """New party i is old party order[i]."""
        order = list(order)
        if sorted(order) != list(range(self.party_count)):
            raise ValueError(f"{order} is not a permutation of the parties")
        dims = tuple(self._dims[o] for o in order)
        return Tensor._raw(dims, {tuple(k[o] for o in order): v for k, v in self._terms.items()})

    def group(self, groups):
        """Merge parties: new party g is the row-major pairing of groups[g] in listed order."""
        groups = [list(g) for g in groups]
        flat = [p for g in groups for p in g]
        if sorted(flat) != list(range(self.party_count)):
            raise ValueError("groups must cover every party exactly once")
        dims = []
        for g in groups:
            d = 1
            for p in g:
                d *= self._dims[p]
            dims.append(d)
        strides = []
        for g in groups:
            s = []
            acc = 1
            for p in reversed(g):
                s.append((p, acc))
                acc *= self._dims[p]
            strides.append(s)
        out = {}
        for k, v in self._terms.items():
            out[tuple(sum(k[p] * w for p, w in s) for s in strides)] = v
        return Tensor._raw(tuple(dims), out)

    def split(self, party, sub_dims):
        """Inverse of grouping for a single party."""
        sub_dims = [int(d) for d in sub_dims]
        total = 1
        for d in sub_dims:
            total *= d
        if total != self._dims[party]:
            raise ValueError(f"sub-dimensions {sub_dims} do not multiply to {self._dims[party]}")
        dims = self._dims[:party] + tuple(sub_dims) + self._dims[party + 1:]
        out = {}
        for k, v in self._terms.items():
            x = k[party]
            digits = []
            for d in reversed(sub_dims):
                digits.append(x % d)
                x //= d
            out[k[:party] + tuple(reversed(digits)) + k[party + 1:]] = v
        return Tensor._raw(dims, out)

    def embed(self, dims):
        """Same coefficients inside larger party spaces."""
        dims = tuple(int(d) for d in dims)
        if len(dims) != self.party_count or any(a < b for a, b in zip(dims, self._dims)):
            raise ValueError(f"cannot embed dims {self._dims} into {dims}")
        return Tensor._raw(dims, dict(self._terms))

    def to_numpy(self, dtype=float):
        import numpy as np
        a = np.zeros(self._dims if self._dims else (), dtype=dtype)
        for k, v in self._terms.items():
            a[k] = dtype(v) if dtype is not object else v
        return a

    # -- serialization ----------------------------------------------------
    def to_json(self):
        return {
            "dims": list(self._dims),
            "terms": [{"idx": list(k), "num": str(v.numerator), "den": str(v.denominator)}
                      for k, v in self.sorted_items()],
        }

    @classmethod
    def from_json(cls, doc):
        if not isinstance(doc, dict) or "dims" not in doc or "terms" not in doc:
            raise ValueError("tensor document needs 'dims' and 'terms'")
        terms = []
        for n, entry in enumerate(doc["terms"]):
            try:
                q = rational_from_strings(entry["num"], entry.get("den", "1"))
                terms.append((entry["idx"], q))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"terms[{n}]: {exc}") from None
        return cls(doc["dims"], terms)

    def canonical_bytes(self):
        return json.dumps(self.to_json(), separators=(",", ":"), sort_keys=True).encode()

    def digest(self):
        return hashlib.sha256(self.canonical_bytes()).hexdigest()


def tensor_product(a: Tensor, b: Tensor) -> Tensor:
    """Parties of a followed by parties of b."""
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            out[ka + kb] = va * vb
    return Tensor._raw(a.dims + b.dims, out)


def kron(a: Tensor, b: Tensor) -> Tensor:
    """Per-party Kronecker product, pairing (i, j) -> i*b.dims[p] + j."""
    if a.party_count != b.party_count:
        raise ValueError(f"kron needs equal party counts, got {a.party_count} and {b.party_count}")
    bd = b.dims
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            out[tuple(i * d + j for i, j, d in zip(ka, kb, bd))] = va * vb
    return Tensor._raw(tuple(x * y for x, y in zip(a.dims, bd)), out)


def kron_power(a: Tensor, n: int) -> Tensor:
    if n < 1:
        raise ValueError("kron power needs n >= 1")
    out = a
    for _ in range(n - 1):
        out = kron(out, a)
    return out


def direct_sum(a: Tensor, b: Tensor) -> Tensor:
    """Block direct sum: a in the low block of every party, b shifted by a.dims."""
    if a.party_count != b.party_count:
        raise ValueError(f"direct sum needs equal party counts, got {a.party_count} and {b.party_count}")
    out = dict(a.items())
    shift = a.dims
    for k, v in b.items():
        out[tuple(i + s for i, s in zip(k, shift))] = v
    return Tensor._raw(tuple(x + y for x, y in zip(a.dims, b.dims)), out)
