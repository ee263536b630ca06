"""The explicit constructions as self-verifying catalog items, plus conversion-bound calculators."""
from .base import CatalogConstruction
from .degenerations import (bini_degeneration, bini_maps, w_degeneration, w_maps, ghz5_to_epr, ghz5_maps,
                            ghz5_source, ghz5_target, ghz5_edgewise_obstruction, interior_projector_support)
from .restrictions import (strassen_decomposition, strassen_maps, global_ghz_extraction, global_ghz_maps,
                           global_ghz_structures, ghz_to_epr_square)
from .moves import PlaquetteAssembly, epr_move, NoLocalRoute, four_cycle_assembly
from .bounds import (border_subrank_epr, sublattice_conversion_bound, tetrahedron_conversion_bound,
                     known_rank_table, KNOWN_RANKS, W_PAIR_GRAPHS, W_PAIR_FOLDS, w_pair_structure)


def _moved():
    return epr_move(four_cycle_assembly(2), 2, 1)


def _moved_back():
    a = four_cycle_assembly(2)
    f = list(a.factors)
    f[2] = (1, f[2][1], f[2][2])
    return epr_move(a.with_factors(f), 2, 0)


def _teleport():
    return epr_move(four_cycle_assembly(2), 0, 1)


REGISTRY = {
    "bini": bini_degeneration,
    "w": w_degeneration,
    "strassen": strassen_decomposition,
    "ghz5_to_epr": ghz5_to_epr,
    "global_ghz": lambda: global_ghz_extraction(2, 2, 2),
    "ghz_to_epr_square": lambda: ghz_to_epr_square(2),
    "epr_move": _moved,
    "epr_move_back": _moved_back,
    "teleport": _teleport,
}


def catalog_items():
    return list(REGISTRY)


def get_construction(name):
    if name not in REGISTRY:
        raise KeyError(f"unknown construction {name!r}; known: {', '.join(REGISTRY)}")
    c = REGISTRY[name]()
    c.id = name
    return c


__all__ = [n for n in dir() if not n.startswith("_")]
