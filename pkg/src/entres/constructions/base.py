"""CatalogConstruction: a source, a target, a map family, and its verification."""
import time

from ..structure import (LocalMapFamily, PolyMapFamily, verify_restriction, verify_degeneration,
                         structure_to_json, maps_to_json)
from ..structure.core import EntanglementStructure


class CatalogConstruction:
    """kind is 'restriction', 'degeneration' or 'equivalence' (restriction with an inverse)."""

    def __init__(self, id, source, target, maps, kind, provenance, inverse=None, expected=None, notes=""):
        if kind not in ("restriction", "degeneration", "equivalence"):
            raise ValueError(f"unknown construction kind {kind!r}")
        self.id = id
        self.source = source
        self.target = target
        self.maps = maps
        self.kind = kind
        self.provenance = provenance
        self.inverse = inverse
        self.expected = dict(expected or {})
        self.notes = notes

    def __repr__(self):
        return f"CatalogConstruction({self.id!r}, kind={self.kind})"

    def verify(self):
        t0 = time.perf_counter()
        if self.kind == "degeneration":
            res = verify_degeneration(self.source, self.target, self.maps)
            if res and "d" in self.expected and res.info["d"] != self.expected["d"]:
                res.ok = False
                res.message = f"expected d={self.expected['d']}, got {res.info['d']}"
            if res and "e" in self.expected and res.info["e"] != self.expected["e"]:
                res.ok = False
                res.message = f"expected e={self.expected['e']}, got {res.info['e']}"
        else:
            res = verify_restriction(self.source, self.target, self.maps)
            if res and self.kind == "equivalence":
                back = verify_restriction(self.target, self.source, self.inverse)
                if not back:
                    res = back
                    res.message = "inverse direction: " + back.message
        res.info["ms"] = round((time.perf_counter() - t0) * 1000, 3)
        return res

    def describe(self):
        def dims(x):
            return list(x.vertex_dims if isinstance(x, EntanglementStructure) else x.dims)
        return {"id": self.id, "kind": self.kind, "provenance": self.provenance,
                "source_dims": dims(self.source), "target_dims": dims(self.target), "notes": self.notes}

    def export(self):
        from ..tensor_core import Tensor

        def enc(x):
            return x.to_json() if isinstance(x, Tensor) else structure_to_json(x)
        doc = {"id": self.id, "kind": self.kind, "provenance": self.provenance,
               "source": enc(self.source), "target": enc(self.target), "maps": maps_to_json(self.maps)}
        if self.inverse is not None:
            doc["inverse"] = maps_to_json(self.inverse)
        return doc
