"""Flattenings and local-map application (rational and eps-polynomial)."""
from .matrix import Matrix
from .poly import PolyMatrix, PolyTensor, _padd, _pmul
from .tensor import Tensor


class NullDegenerationError(ValueError):
    pass


def _mixed_radix(idx, parties, dims):
    x = 0
    for p in parties:
        x = x * dims[p] + idx[p]
    return x


def flatten(t: Tensor, left_parties) -> Matrix:
    """Rows: left parties (row-major, party order); cols: the complement."""
    left = sorted(set(int(p) for p in left_parties))
    k = t.party_count
    if not left or len(left) == k or any(not 0 <= p < k for p in left):
        raise ValueError("left_parties must be a nonempty proper subset of the parties")
    right = [p for p in range(k) if p not in left]
    rows = cols = 1
    for p in left:
        rows *= t.dims[p]
    for p in right:
        cols *= t.dims[p]
    data = {(_mixed_radix(i, left, t.dims), _mixed_radix(i, right, t.dims)): v for i, v in t.items()}
    return Matrix._raw(rows, cols, data)


def _as_list(maps):
    if hasattr(maps, "maps"):
        return list(maps.maps)
    return list(maps)


def _check(t, maps):
    if len(maps) != t.party_count:
        raise ValueError(f"{len(maps)} maps for a {t.party_count}-party tensor")
    for p, m in enumerate(maps):
        if m.cols != t.dims[p]:
            raise ValueError(f"dimension mismatch at party {p}: map has {m.cols} columns, party dimension is {t.dims[p]}")


def _order(maps):
    # contract sparse / shrinking maps first to keep intermediate term counts low
    return sorted(range(len(maps)), key=lambda p: (maps[p].nnz / max(1, maps[p].cols), p))


def apply_local_maps(t: Tensor, maps) -> Tensor:
    """(M_0 x ... x M_{k-1}) t, exactly."""
    maps = _as_list(maps)
    _check(t, maps)
    terms = dict(t.items())
    for p in _order(maps):
        m = maps[p]
        if m.rows == m.cols and m.nnz == m.rows and all(m[i, i] == 1 for i in range(m.rows)):
            continue
        cmap = m.column_map()
        new = {}
        for idx, v in terms.items():
            col = cmap.get(idx[p])
            if not col:
                continue
            pre, post = idx[:p], idx[p + 1:]
            for i, w in col:
                key = pre + (i,) + post
                s = new.get(key, 0) + v * w
                if s:
                    new[key] = s
                else:
                    new.pop(key, None)
        terms = new
    return Tensor._raw(tuple(m.rows for m in maps), terms)


def poly_apply(t: Tensor, maps) -> PolyTensor:
    maps = [PolyMatrix.coerce(m) for m in _as_list(maps)]
    _check(t, maps)
    terms = {k: {0: v} for k, v in t.items()}
    for p in _order(maps):
        cmap = maps[p].column_map()
        new = {}
        for idx, v in terms.items():
            col = cmap.get(idx[p])
            if not col:
                continue
            pre, post = idx[:p], idx[p + 1:]
            for i, w in col:
                key = pre + (i,) + post
                s = _padd(new.get(key, {}), _pmul(v, w))
                if s:
                    new[key] = s
                else:
                    new.pop(key, None)
        terms = new
    return PolyTensor._raw(tuple(m.rows for m in maps), terms)


def poly_apply_and_leading(t: Tensor, maps):
    """Apply eps-polynomial maps; return (d, lead, tail).

    d is the lowest eps-degree present, lead its coefficient tensor and tail the
    terms of degree > d.  e = tail.max_degree() - d (0 when tail is empty).
    """
    full = poly_apply(t, maps)
    if full.is_zero():
        raise NullDegenerationError("null degeneration: the image is identically zero")
    d = full.min_degree()
    return d, full.coefficient(d), full.drop_below(d + 1)
