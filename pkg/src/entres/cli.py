"""entres command line: JSON reports on stdout.

Exit codes: 0 success, 2 verification failed / expectation mismatch, 1 usage or input error.
"""
import argparse
from concurrent.futures import ThreadPoolExecutor
import hashlib
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import hypergraph as hg
from .tensor_core import Tensor
from .structure import (EntanglementStructure, FormatError, MaterializationError, as_structure, catalog_state,
                        catalog_names, dump_json, load_json, maps_from_json, maps_to_json, materialize,
                        structure_from_json, structure_to_json, uniform_structure, verify_degeneration,
                        verify_restriction, interpolate_degeneration, fold_structure, merge_parallel_edges,
                        check_stabilizer, double_w_structure, double_w_stabilizer, split_shared_vertex_map,
                        SplitFailure, ghz, epr_triangle, epr_square, w_state)
from .structure.io import matrix_from_json

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


def threads():
    raw = os.environ.get("ENTRES_THREADS", "")
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"ENTRES_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError("ENTRES_THREADS must be at least 1")
    return n


def digest(doc):
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _enc(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_enc(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_enc(v) for v in x)
    if hasattr(x, "to_json"):
        return _enc(x.to_json())
    return x


class Report:
    def __init__(self, command):
        self.doc = {"subcommand": command, "inputs": {}, "result": {}, "provenance": [], "timings_ms": {}}
        self.t0 = time.perf_counter()

    def input(self, name, doc):
        self.doc["inputs"][name] = digest(doc)

    def time(self, name, t_start):
        self.doc["timings_ms"][name] = round((time.perf_counter() - t_start) * 1000, 3)


# -- input helpers ----------------------------------------------------------

def _read(report, name, path):
    doc = load_json(path)
    report.input(name, doc)
    return doc


def _parse_params(items):
    out = {}
    for it in items or ():
        if "=" not in it:
            raise UsageError(f"parameter {it!r} is not key=value")
        k, v = it.split("=", 1)
        try:
            out[k] = int(v)
        except ValueError:
            out[k] = v
    return out


def _state(name, params):
    try:
        return catalog_state(name, params or None)
    except KeyError as exc:
        raise UsageError(str(exc.args[0]))
    except TypeError as exc:
        raise UsageError(f"bad parameters for {name}: {exc}")


def _load_structure(report, name, path):
    doc = _read(report, name, path)
    return structure_from_json(doc, f"{path}:$")


def _load_maps(report, name, path):
    doc = _read(report, name, path)
    return maps_from_json(doc, f"{path}:$")


def _graph(args):
    lat, rows, cols = args.lattice, args.rows, args.cols
    if lat == "square":
        return hg.square_lattice(rows, cols, args.periodic)
    if lat == "plaquette":
        return hg.plaquette_square_lattice(rows, cols, args.periodic)
    if lat == "kagome":
        return hg.kagome_lattice(rows, cols, "periodic" if args.periodic else "open")
    if lat == "triangular":
        return hg.triangular_lattice(rows, cols, periodic=True)
    if lat == "fan":
        return hg.fan(rows)
    if lat == "edge":
        return hg.single_edge(rows)
    raise UsageError(f"unknown lattice {lat!r}")


# -- subcommands ------------------------------------------------------------

def cmd_build(args, rep):
    g = _graph(args)
    state = _state(args.state, _parse_params(args.param))
    s = uniform_structure(g, state)
    doc = structure_to_json(s)
    if args.out:
        dump_json(doc, args.out, args.pretty)
    rep.doc["result"] = {"structure": doc if not args.out else None, "digest": digest(doc), "written": args.out,
                         "vertex_dims": list(s.vertex_dims), "edges": g.edge_count}
    rep.doc["provenance"].append(f"{args.lattice} lattice with {args.state} on every edge")
    return EXIT_OK


def cmd_materialize(args, rep):
    s = _load_structure(rep, "structure", args.structure)
    t0 = time.perf_counter()
    t = materialize(s, args.cap) if isinstance(s, EntanglementStructure) else s
    rep.time("materialize", t0)
    doc = t.to_json()
    if args.out:
        dump_json(doc, args.out, args.pretty)
    rep.doc["result"] = {"dims": list(t.dims), "terms": t.nnz, "digest": t.digest(),
                         "tensor": None if args.out else doc, "written": args.out}
    return EXIT_OK


def _verify(args, rep, degeneration):
    src = _load_structure(rep, "src", args.src)
    dst = _load_structure(rep, "dst", args.dst)
    maps = _load_maps(rep, "maps", args.maps)
    t0 = time.perf_counter()
    res = (verify_degeneration if degeneration else verify_restriction)(src, dst, maps, args.cap)
    rep.time("verify", t0)
    rep.doc["result"] = _enc(res.to_json())
    rep.doc["result"]["verified"] = bool(res)
    return EXIT_OK if res else EXIT_FAILED


def cmd_verify_restriction(args, rep):
    return _verify(args, rep, False)


def cmd_verify_degeneration(args, rep):
    return _verify(args, rep, True)


def cmd_interpolate(args, rep):
    if args.construction:
        from .constructions import get_construction
        c = get_construction(args.construction)
        if c.kind != "degeneration":
            raise UsageError(f"{args.construction} is not a degeneration")
        src, dst, maps = c.source, c.target, c.maps
        rep.doc["provenance"].append(c.provenance)
    else:
        if not (args.src and args.dst and args.maps):
            raise UsageError("interpolate needs --construction or all of --src, --dst, --maps")
        src = _load_structure(rep, "src", args.src)
        dst = _load_structure(rep, "dst", args.dst)
        maps = _load_maps(rep, "maps", args.maps)
    t0 = time.perf_counter()
    new_src, family, (d, e) = interpolate_degeneration(src, dst, maps)
    rep.time("interpolate", t0)
    t0 = time.perf_counter()
    res = verify_restriction(new_src, dst, family)
    rep.time("verify", t0)
    mdoc = maps_to_json(family)
    if args.out:
        dump_json(mdoc, args.out, args.pretty)
    rep.doc["result"] = {"d": d, "e": e, "ghz_level": e + 1, "verified": bool(res), "message": res.message,
                         "maps_digest": digest(mdoc), "written": args.out}
    return EXIT_OK if res else EXIT_FAILED


def _vertex_map(text):
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError(f"--map must be comma-separated integers, got {text!r}")


def cmd_fold(args, rep):
    s = _load_structure(rep, "structure", args.structure)
    s = as_structure(s)
    vm = _vertex_map(args.map)
    try:
        folded = fold_structure(s, vm, drop_internal=args.drop_internal)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.merge:
        folded = merge_parallel_edges(folded)
    doc = structure_to_json(folded)
    if args.out:
        dump_json(doc, args.out, args.pretty)
    rep.doc["result"] = {"graph": folded.graph.to_json(), "vertex_dims": list(folded.vertex_dims),
                         "digest": digest(doc), "structure": None if args.out else doc, "written": args.out}
    return EXIT_OK


def _config(rep, path):
    if not path:
        return {}
    cfg = _read(rep, "config", path)
    if not isinstance(cfg, dict):
        raise FormatError(f"{path}:$: config must be an object")
    return cfg


def _theta(cfg):
    th = cfg.get("theta", "uniform")
    if th == "uniform":
        return "uniform"
    if not isinstance(th, list):
        raise FormatError("config $.theta must be 'uniform' or a list")
    return [Fraction(str(x)) for x in th]


def _bipartitions(cfg):
    b = cfg.get("bipartitions", "all")
    if b == "all":
        return None
    if not isinstance(b, list):
        raise FormatError("config $.bipartitions must be 'all' or a list of vertex lists")
    return [list(x) for x in b]


PRESET_SOURCES = ("ghz_r",)
PRESET_TARGETS = ("eprD_kagome", "eprD_triangular", "eprD_triangle", "eprD_square")


def _obstruct_presets(args, rep):
    from .obstructions import lattice_koszul_battery, best_koszul_bound, stripe_bound
    if args.src != "ghz_r":
        raise UsageError(f"preset source must be one of {', '.join(PRESET_SOURCES)}")
    r, D = args.r, args.D
    if r is None or D is None:
        raise UsageError("presets need -r and -D")
    t0 = time.perf_counter()
    if args.dst in ("eprD_kagome", "eprD_triangular"):
        if args.battery not in ("koszul", "all"):
            raise UsageError("lattice presets use the koszul battery")
        lat = args.dst.split("_")[1]
        b = lattice_koszul_battery(lat, D, r)
        need = b.bound
    elif args.dst == "eprD_triangle":
        b = best_koszul_bound(epr_triangle(D))
        need = b.bound
    elif args.dst == "eprD_square":
        b = stripe_bound(D, r)
        need = b.bound
    else:
        raise UsageError(f"preset target must be one of {', '.join(PRESET_TARGETS)}")
    rep.time("battery", t0)
    verdict = "obstructed" if r < need else "inconclusive"
    rep.doc["result"] = {"bound": {"r_min": need, "report": _enc(b.to_json())}, "r": r, "D": D, "verdict": verdict}
    rep.doc["provenance"].append(b.provenance)
    return verdict


def _obstruct_files(args, rep, cfg):
    from .obstructions import (restriction_flattening_check, asymptotic_obstruction_check, rank_bounds,
                               koszul_bound, best_koszul_bound)
    src = _load_structure(rep, "src", args.src)
    dst = _load_structure(rep, "dst", args.dst)
    results = {}
    verdict = "inconclusive"
    battery = args.battery
    t0 = time.perf_counter()
    if battery in ("flattening", "all"):
        hit = restriction_flattening_check(src, dst, _bipartitions(cfg))
        results["flattening"] = {"witness": hit, "verdict": "obstructed" if hit else "inconclusive",
                                 "note": "restriction and degeneration ruled out" if hit else ""}
        if hit:
            verdict = "obstructed"
    if battery in ("functional", "all"):
        a, b = as_structure(src), as_structure(dst)
        res = asymptotic_obstruction_check(a, b, _theta(cfg))
        results["functional"] = _enc(res)
        if res["verdict"] == "obstructed":
            verdict = "obstructed"
    if battery in ("koszul", "all"):
        if not (isinstance(dst, Tensor) and dst.party_count == 3 and isinstance(src, Tensor)):
            results["koszul"] = {"verdict": "inconclusive", "note": "koszul battery on files needs two 3-party tensors"}
        else:
            ps = cfg.get("koszul_p")
            if ps:
                reps = [koszul_bound(dst, 2, int(p)) for p in ps]
                best = max(reps, key=lambda x: x.value)
            else:
                best = best_koszul_bound(dst)
            up = rank_bounds(src, "fast").upper
            ob = up < best.bound
            results["koszul"] = {"target_border_rank_lower": best.bound, "source_rank_upper": up,
                                 "report": _enc(best.to_json()), "verdict": "obstructed" if ob else "inconclusive"}
            if ob:
                verdict = "obstructed"
    rep.time("battery", t0)
    rep.doc["result"] = {"batteries": results, "verdict": verdict}
    return verdict


def cmd_obstruct(args, rep):
    cfg = _config(rep, args.config)
    if args.src in PRESET_SOURCES or args.dst in PRESET_TARGETS:
        verdict = _obstruct_presets(args, rep)
    else:
        verdict = _obstruct_files(args, rep, cfg)
    if args.expect and args.expect != verdict:
        rep.doc["result"]["expectation"] = f"expected {args.expect}, got {verdict}"
        return EXIT_FAILED
    return EXIT_OK


def cmd_catalog(args, rep):
    from .constructions import catalog_items, get_construction, known_rank_table
    if args.known is not None:
        try:
            rep.doc["result"] = {"known": known_rank_table(args.known or None)}
        except KeyError as exc:
            raise UsageError(str(exc.args[0]))
        return EXIT_OK
    if args.item:
        try:
            c = get_construction(args.item)
        except KeyError as exc:
            raise UsageError(str(exc.args[0]))
        res = c.verify()
        out = c.describe()
        out.update({"verified": bool(res), "message": res.message, "info": _enc(res.info)})
        if args.export:
            doc = c.export()
            dump_json(doc, args.export, args.pretty)
            out["export_digest"] = digest(doc)
        rep.doc["result"] = {"items": [out]}
        return EXIT_OK if res else EXIT_FAILED
    if args.verify_all:
        names = catalog_items()

        def run(name):
            c = get_construction(name)
            res = c.verify()
            d = c.describe()
            d.update({"verified": bool(res), "message": res.message})
            return d, res.info.get("ms", 0)
        with ThreadPoolExecutor(max_workers=threads()) as pool:
            done = list(pool.map(run, names))
        items = [d for d, _ in done]
        for name, (_, ms) in zip(names, done):
            rep.doc["timings_ms"][name] = ms
        rep.doc["result"] = {"items": items, "all_verified": all(d["verified"] for d in items)}
        return EXIT_OK if rep.doc["result"]["all_verified"] else EXIT_FAILED
    rep.doc["result"] = {"constructions": catalog_items(), "states": catalog_names()}
    return EXIT_OK


def cmd_contract(args, rep):
    from .contraction import CovectorAssignment, contract, greedy_order, naive_plan
    s = as_structure(_load_structure(rep, "structure", args.structure))
    cov = CovectorAssignment.from_json(_read(rep, "covectors", args.covectors))
    try:
        cov.check(s)
    except ValueError as exc:
        raise UsageError(str(exc))
    plan = greedy_order(s, cov) if args.plan == "greedy" else naive_plan(s)
    t0 = time.perf_counter()
    v = contract(s, cov, plan)
    rep.time("contract", t0)
    rep.doc["result"] = {"value": str(v), "plan": plan.to_json()}
    return EXIT_OK


def cmd_matchings(args, rep):
    from .contraction import matchings_partition_brute, matchings_vertex_tensors, contract
    G = hg.square_lattice(args.rows, args.cols)
    if args.x:
        doc = _read(rep, "x", args.x)
        xs = doc.get("x") if isinstance(doc, dict) else doc
        if not isinstance(xs, list):
            raise FormatError(f"{args.x}:$: expected a list of edge weights or {{\"x\": [...]}}")
        x = [Fraction(str(v)) for v in xs]
    elif args.seed is not None:
        rng = random.Random(args.seed)
        x = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(G.edge_count)]
    else:
        x = [Fraction(1)] * G.edge_count
    if len(x) != G.edge_count:
        raise UsageError(f"{len(x)} edge weights for {G.edge_count} edges")
    t0 = time.perf_counter()
    s, a = matchings_vertex_tensors(G, x)
    c = contract(s, a)
    rep.time("contract", t0)
    t0 = time.perf_counter()
    b = matchings_partition_brute(G, x)
    rep.time("brute", t0)
    rep.doc["result"] = {"rows": args.rows, "cols": args.cols, "x": [str(v) for v in x], "brute": str(b),
                         "contracted": str(c), "equal": b == c}
    return EXIT_OK if b == c else EXIT_FAILED


def cmd_rank_bounds(args, rep):
    from .obstructions import rank_bounds
    if args.tensor:
        t = _load_structure(rep, "tensor", args.tensor)
        if isinstance(t, EntanglementStructure):
            t = materialize(t)
    elif args.state:
        t = _state(args.state, _parse_params(args.param))
        rep.input("state", t.to_json())
    else:
        raise UsageError("rank-bounds needs --tensor or --state")
    t0 = time.perf_counter()
    rb = rank_bounds(t, args.effort, seed=args.seed)
    rep.time("bounds", t0)
    rep.doc["result"] = _enc(rb.to_json())
    rep.doc["provenance"] = list(rb.provenance)
    return EXIT_OK


def cmd_stabilizer(args, rep):
    if args.example == "double-w":
        q = Fraction(str(args.q))
        s = double_w_structure()
        maps = double_w_stabilizer(q)
        res = check_stabilizer(s, maps)
        out = {"example": "double-w", "q": str(q), "stabilizer": bool(res), "message": res.message}
        try:
            split_shared_vertex_map(maps[0], w_state(3), w_state(3), (2, 2))
            out["splits"] = True
        except SplitFailure as exc:
            out["splits"] = False
            out["split_failure"] = str(exc)
        rep.doc["result"] = out
        return EXIT_OK if res else EXIT_FAILED
    if not (args.structure and args.maps):
        raise UsageError("stabilizer needs --example double-w or --structure and --maps")
    s = _load_structure(rep, "structure", args.structure)
    maps = _load_maps(rep, "maps", args.maps)
    try:
        res = check_stabilizer(s, maps)
    except ValueError as exc:
        raise UsageError(str(exc))
    rep.doc["result"] = {"stabilizer": bool(res), "message": res.message}
    return EXIT_OK if res else EXIT_FAILED


# -- parser -----------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="entres", description="Exact tensor-network resource computations.")
    p.add_argument("--pretty", action="store_true", help="indented JSON")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        q = sub.add_parser(name, help=help_)
        q.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indented JSON")
        q.set_defaults(fn=fn)
        return q

    q = add("build", cmd_build, "build a structure on a generated lattice")
    q.add_argument("--lattice", required=True, choices=["square", "plaquette", "kagome", "triangular", "fan", "edge"])
    q.add_argument("--rows", type=int, default=2, help="rows (fan: number of edges, edge: party count)")
    q.add_argument("--cols", type=int, default=2)
    q.add_argument("--periodic", action="store_true")
    q.add_argument("--state", required=True, help="catalog state name")
    q.add_argument("--param", action="append", metavar="KEY=VALUE")
    q.add_argument("--out")

    q = add("materialize", cmd_materialize, "materialize a structure to one tensor")
    q.add_argument("--structure", required=True)
    q.add_argument("--cap", type=int, default=10 ** 7)
    q.add_argument("--out")

    for name, fn in (("verify-restriction", cmd_verify_restriction), ("verify-degeneration", cmd_verify_degeneration)):
        q = add(name, fn, name.replace("-", " "))
        q.add_argument("--src", required=True)
        q.add_argument("--dst", required=True)
        q.add_argument("--maps", required=True)
        q.add_argument("--cap", type=int, default=10 ** 7)

    q = add("interpolate", cmd_interpolate, "turn a degeneration into a restriction from a bigger source")
    q.add_argument("--construction", help="catalog degeneration, e.g. bini or w")
    q.add_argument("--src")
    q.add_argument("--dst")
    q.add_argument("--maps")
    q.add_argument("--out")

    q = add("fold", cmd_fold, "fold a structure along a vertex map")
    q.add_argument("--structure", required=True)
    q.add_argument("--map", required=True, help="comma-separated target vertex per source vertex")
    q.add_argument("--merge", action="store_true", help="merge parallel edges by Kronecker product")
    q.add_argument("--drop-internal", action="store_true")
    q.add_argument("--out")

    q = add("obstruct", cmd_obstruct, "run obstruction batteries")
    q.add_argument("--src", required=True, help="structure file or preset ghz_r")
    q.add_argument("--dst", required=True, help="structure file or preset " + "|".join(PRESET_TARGETS))
    q.add_argument("--battery", default="all", choices=["flattening", "koszul", "functional", "all"])
    q.add_argument("--config")
    q.add_argument("-r", type=int)
    q.add_argument("-D", type=int)
    q.add_argument("--expect", choices=["obstructed", "inconclusive"])

    q = add("catalog", cmd_catalog, "list the shipped constructions, or verify and export them")
    q.add_argument("--verify-all", action="store_true")
    q.add_argument("--item")
    q.add_argument("--export")
    q.add_argument("--known", nargs="?", const="", default=None, help="literature rank values (optional query)")

    q = add("contract", cmd_contract, "evaluate a tensor-network coefficient")
    q.add_argument("--structure", required=True)
    q.add_argument("--covectors", required=True)
    q.add_argument("--plan", choices=["greedy", "naive"], default="greedy")

    q = add("matchings", cmd_matchings, "matchings partition function: contraction vs brute force")
    q.add_argument("--rows", type=int, required=True)
    q.add_argument("--cols", type=int, required=True)
    g = q.add_mutually_exclusive_group()
    g.add_argument("--x")
    g.add_argument("--seed", type=int)

    q = add("rank-bounds", cmd_rank_bounds, "certified rank bounds")
    q.add_argument("--tensor")
    q.add_argument("--state")
    q.add_argument("--param", action="append", metavar="KEY=VALUE")
    q.add_argument("--effort", choices=["fast", "default", "high"], default="default")
    q.add_argument("--seed", type=int, default=0)

    q = add("stabilizer", cmd_stabilizer, "check a stabilizer family or the double-W example")
    q.add_argument("--example", choices=["double-w"])
    q.add_argument("--q", default="2")
    q.add_argument("--structure")
    q.add_argument("--maps")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    rep = Report(args.command)
    try:
        threads()
        code = args.fn(args, rep)
    except (UsageError, FormatError, MaterializationError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        rep.doc["error"] = f"{type(exc).__name__}: {msg}"
        code = EXIT_INPUT
    rep.doc["exit_code"] = code
    rep.time("total", rep.t0)
    sys.stdout.write(dump_json(rep.doc, pretty=args.pretty) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
