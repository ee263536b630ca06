"""Aggregate certified rank bounds, plus separately labelled evidence and literature values."""
from dataclasses import dataclass, field
import math

from ..tensor_core import Tensor, hyperdeterminant_222, als_rank_fit, flatten, matrix_rank
from ..structure import ghz, epr_triangle, w_state, verify_restriction
from ..constructions.restrictions import strassen_maps
from ..constructions.bounds import known_rank_table
from .flattening import flattening_lower_bound
from .koszul import best_koszul_bound

EFFORTS = ("fast", "default", "high")
ALS_TOLERANCE = 1e-10


@dataclass
class RankBounds:
    lower: int
    upper: int
    provenance: list
    evidence: list = field(default_factory=list)
    known: dict = None

    def __iter__(self):
        return iter((self.lower, self.upper, self.provenance))

    def to_json(self):
        return {"lower": self.lower, "upper": self.upper, "provenance": self.provenance,
                "evidence": self.evidence, "known": self.known}


def _classify_222(t: Tensor):
    """Exact rank of a 2x2x2 tensor or None.  hyperdet != 0: 2; hyperdet = 0 and all flattenings
    of rank 2: 3 (W type); otherwise the max flattening rank."""
    if t.dims != (2, 2, 2):
        return None
    if hyperdeterminant_222(t) != 0:
        return 2, "2x2x2 classification: hyperdeterminant nonzero (generic orbit)"
    ranks = [matrix_rank(flatten(t, [i])) for i in range(3)]
    if min(ranks) == 2:
        return 3, "2x2x2 classification: hyperdeterminant zero, all flattenings rank 2 (W orbit)"
    return max(ranks), "2x2x2 classification: degenerate flattening, rank = max flattening rank"


def _catalog_upper(t: Tensor):
    k = t.party_count
    if k >= 2 and len(set(t.dims)) == 1 and t == ghz(t.dims[0], k):
        return t.dims[0], "diagonal (GHZ) decomposition"
    if t.dims == (4, 4, 4) and t == epr_triangle(2):
        res = verify_restriction(ghz(7, 3), t, strassen_maps())
        if res:
            return 7, "Strassen 7-term decomposition, verified exactly"
    return None


def rank_bounds(t: Tensor, effort: str = "default", seed: int = 0) -> RankBounds:
    """Lower = max of certified bounds; upper = best certified decomposition.

    ALS fits (effort 'high') and literature values are reported separately and
    never move the certified interval.
    """
    if effort not in EFFORTS:
        raise ValueError(f"effort must be one of {', '.join(EFFORTS)}")
    if t.is_zero():
        return RankBounds(0, 0, ["zero tensor"])
    prov = []
    fl = flattening_lower_bound(t)
    lower = fl.bound
    prov.append(f"lower {fl.bound}: {fl.provenance}")
    exact = _classify_222(t)
    if exact:
        prov.append(f"lower {exact[0]}: {exact[1]}")
        lower = max(lower, exact[0])
    if effort != "fast" and t.party_count == 3 and min(t.dims) >= 2:
        best = None
        for q in range(3):
            rep = best_koszul_bound(t, q, seed=seed)
            if best is None or rep.value > best.value:
                best = rep
        prov.append(f"lower {best.bound}: {best.provenance} (border-rank bound)")
        lower = max(lower, best.bound)

    nnz = t.nnz
    upper = nnz
    prov.append(f"upper {nnz}: one product term per nonzero entry")
    flat_dims = math.prod(t.dims) // max(t.dims) if t.party_count >= 2 else 1
    if flat_dims < upper:
        upper = flat_dims
        prov.append(f"upper {flat_dims}: expand along all parties but the largest")
    if exact and exact[0] < upper:
        upper = exact[0]
        prov.append(f"upper {exact[0]}: {exact[1]}")
    cat = _catalog_upper(t)
    if cat and cat[0] < upper:
        upper = cat[0]
        prov.append(f"upper {cat[0]}: {cat[1]}")

    evidence = []
    if effort == "high" and upper > lower and t.party_count == 3:
        for r in range(lower, upper):
            res = als_rank_fit(t, r, seed=seed)
            evidence.append({"rank": r, "residual": res, "fits": res < ALS_TOLERANCE,
                             "note": "ALS evidence, not certified"})
            if res < ALS_TOLERANCE:
                break
    known = None
    for key, state in (("epr2_triangle", epr_triangle(2)), ("w", w_state(3))):
        if t.dims == state.dims and t == state:
            known = known_rank_table(key)
    if lower > upper:
        raise AssertionError(f"inconsistent bounds: lower {lower} > upper {upper}")
    return RankBounds(lower, upper, prov, evidence, known)
