"""JSON formats for structures and map families.

Structure: {"graph": {"vertices": n, "edges": [...]}, "edge_states": [T, ...]}
where each T is a tensor document or a catalog reference {"catalog": "ghz", "r": 2, "k": 3}.

Map family: {"maps": [M_0, M_1, ...]}; each M is
  {"rows": r, "cols": c, "entries": [[x, ...], ...]}      (dense), or
  {"rows": r, "cols": c, "sparse": [[i, j, x], ...]}      (sparse),
with x a rational string ("-3/2") or an eps-polynomial {"0": "1", "1": "-2"} keyed by degree.
"""
import json
from fractions import Fraction

from ..hypergraph import Hypergraph
from ..tensor_core import Tensor, Matrix, PolyMatrix, EpsPoly
from .catalog import catalog_state
from .core import EntanglementStructure, LocalMapFamily, PolyMapFamily


class FormatError(ValueError):
    """Malformed document; the message names the JSON path."""


def _fail(path, msg):
    raise FormatError(f"{path}: {msg}")


def tensor_from_doc(doc, path="$"):
    if isinstance(doc, dict) and "catalog" in doc:
        params = {k: v for k, v in doc.items() if k != "catalog"}
        try:
            return catalog_state(doc["catalog"], params)
        except (KeyError, TypeError, ValueError) as exc:
            _fail(path, f"bad catalog reference: {exc}")
    try:
        return Tensor.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        _fail(path, f"bad tensor: {exc}")


def structure_to_json(s: EntanglementStructure):
    return {"graph": s.graph.to_json(), "edge_states": [t.to_json() for t in s.edge_states]}


def structure_from_json(doc, path="$"):
    if isinstance(doc, dict) and "dims" in doc and "terms" in doc:
        return tensor_from_doc(doc, path)
    if not isinstance(doc, dict) or "graph" not in doc or "edge_states" not in doc:
        _fail(path, "structure document needs 'graph' and 'edge_states'")
    try:
        g = Hypergraph.from_json(doc["graph"])
    except (TypeError, ValueError) as exc:
        _fail(path + ".graph", str(exc))
    states = doc["edge_states"]
    if not isinstance(states, list):
        _fail(path + ".edge_states", "must be a list")
    tensors = [tensor_from_doc(t, f"{path}.edge_states[{n}]") for n, t in enumerate(states)]
    try:
        return EntanglementStructure(g, tensors)
    except (TypeError, ValueError) as exc:
        _fail(path, str(exc))


def _entry(x, path):
    if isinstance(x, dict):
        try:
            return EpsPoly.from_json(x)
        except (TypeError, ValueError) as exc:
            _fail(path, f"bad eps-polynomial: {exc}")
    if isinstance(x, bool) or isinstance(x, float):
        _fail(path, "entries must be integers or rational strings")
    try:
        return Fraction(str(x))
    except ValueError:
        _fail(path, f"bad rational {x!r}")


def matrix_from_json(doc, path="$"):
    """Returns a Matrix, or a PolyMatrix if any entry has positive eps-degree."""
    if not isinstance(doc, dict) or "rows" not in doc or "cols" not in doc:
        _fail(path, "matrix needs 'rows' and 'cols'")
    rows, cols = int(doc["rows"]), int(doc["cols"])
    data = {}
    if "sparse" in doc:
        for n, item in enumerate(doc["sparse"]):
            if not isinstance(item, list) or len(item) != 3:
                _fail(f"{path}.sparse[{n}]", "expected [i, j, value]")
            i, j, x = item
            data[(int(i), int(j))] = _entry(x, f"{path}.sparse[{n}][2]")
    elif "entries" in doc:
        ent = doc["entries"]
        if len(ent) != rows:
            _fail(path + ".entries", f"expected {rows} rows, found {len(ent)}")
        for i, row in enumerate(ent):
            if len(row) != cols:
                _fail(f"{path}.entries[{i}]", f"expected {cols} columns, found {len(row)}")
            for j, x in enumerate(row):
                v = _entry(x, f"{path}.entries[{i}][{j}]")
                if v != 0:
                    data[(i, j)] = v
    else:
        _fail(path, "matrix needs 'entries' or 'sparse'")
    poly = any(isinstance(v, EpsPoly) and (v.degree() or 0) > 0 for v in data.values())
    try:
        if poly:
            return PolyMatrix(rows, cols, data)
        return Matrix(rows, cols, {k: (v.coefficient(0) if isinstance(v, EpsPoly) else v)
                                   for k, v in data.items()})
    except ValueError as exc:
        _fail(path, str(exc))


def _poly_entry_json(coeffs):
    return {str(d): str(coeffs[d]) for d in sorted(coeffs)}


def matrix_to_json(m, dense=None):
    poly = isinstance(m, PolyMatrix)
    items = sorted(m.raw_items()) if poly else sorted(m.items())
    if dense is None:
        dense = m.rows * m.cols <= 4096 and len(items) * 4 >= m.rows * m.cols
    enc = (lambda v: _poly_entry_json(v)) if poly else (lambda v: str(v))
    doc = {"rows": m.rows, "cols": m.cols}
    if dense:
        zero = {} if poly else "0"
        grid = [[zero] * m.cols for _ in range(m.rows)]
        for (i, j), v in items:
            grid[i][j] = enc(v)
        doc["entries"] = grid
    else:
        doc["sparse"] = [[i, j, enc(v)] for (i, j), v in items]
    return doc


def maps_to_json(family):
    return {"maps": [matrix_to_json(m) for m in family.maps]}


def maps_from_json(doc, path="$"):
    if not isinstance(doc, dict) or "maps" not in doc or not isinstance(doc["maps"], list):
        _fail(path, "map family needs a 'maps' list")
    mats = [matrix_from_json(m, f"{path}.maps[{v}]") for v, m in enumerate(doc["maps"])]
    if any(isinstance(m, PolyMatrix) for m in mats):
        return PolyMapFamily(mats)
    return LocalMapFamily(mats)


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"{path}: cannot read ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc


def dump_json(doc, path=None, pretty=False):
    text = json.dumps(doc, indent=2 if pretty else None, separators=None if pretty else (",", ":"), sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
