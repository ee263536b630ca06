import json

import pytest

from entres.cli import main
from entres.structure import LocalMapFamily, structure_to_json, maps_to_json, as_structure, ghz, epr, epr_triangle, w_state
from entres.tensor_core import Matrix
from entres.hypergraph import square_lattice
from entres.constructions import strassen_maps, get_construction


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def _strip(doc):
    doc = dict(doc)
    doc.pop("timings_ms", None)
    if isinstance(doc.get("result"), dict):
        r = dict(doc["result"])
        info = r.get("info")
        if isinstance(info, dict):
            r["info"] = {k: v for k, v in info.items() if k != "ms"}
        doc["result"] = r
    return doc


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


@pytest.fixture
def strassen_files(tmp_path):
    src = _write(tmp_path, "src.json", structure_to_json(as_structure(ghz(7, 3))))
    dst = _write(tmp_path, "dst.json", structure_to_json(as_structure(epr_triangle(2))))
    maps = _write(tmp_path, "maps.json", maps_to_json(strassen_maps()))
    return src, dst, maps


def test_verify_restriction_ok_and_failed(capsys, tmp_path, strassen_files):
    src, dst, maps = strassen_files
    code, doc = run(capsys, "verify-restriction", "--src", src, "--dst", dst, "--maps", maps)
    assert code == 0 and doc["result"]["verified"]
    assert set(doc["inputs"]) == {"src", "dst", "maps"} and all(len(v) == 64 for v in doc["inputs"].values())
    wrong = _write(tmp_path, "w.json", structure_to_json(as_structure(w_state(3))))
    keep2 = LocalMapFamily([Matrix(2, 7, {(0, 0): 1, (1, 1): 1})] * 3)
    code, doc = run(capsys, "verify-restriction", "--src", src, "--dst", wrong, "--maps",
                    _write(tmp_path, "m2.json", maps_to_json(keep2)))
    assert code == 2 and not doc["result"]["verified"]


def test_dims_mismatch_exits_one(capsys, tmp_path, strassen_files):
    src, _, maps = strassen_files
    dst = _write(tmp_path, "d.json", structure_to_json(as_structure(ghz(2, 3))))
    code, doc = run(capsys, "verify-restriction", "--src", src, "--dst", dst, "--maps", maps)
    assert code == 1 and "error" in doc


def test_malformed_file_names_path(capsys, tmp_path):
    bad = _write(tmp_path, "bad.json", {"dims": [2, 2], "terms": [{"idx": [0], "num": "1", "den": "1"}]})
    code, doc = run(capsys, "materialize", "--structure", bad)
    assert code == 1 and "bad.json" in doc["error"]
    code, doc = run(capsys, "materialize", "--structure", str(tmp_path / "missing.json"))
    assert code == 1


def test_unknown_subcommand_exits_one(capsys):
    assert main(["frobnicate"]) == 1
    capsys.readouterr()


def test_catalog_verify_all(capsys):
    code, doc = run(capsys, "catalog", "--verify-all")
    assert code == 0 and doc["result"]["all_verified"]
    assert all(item["verified"] for item in doc["result"]["items"])


def test_catalog_byte_stable_across_threads(capsys, monkeypatch):
    outs = []
    for n in ("1", "4", "1"):
        monkeypatch.setenv("ENTRES_THREADS", n)
        code, doc = run(capsys, "catalog", "--verify-all")
        assert code == 0
        outs.append(json.dumps(_strip(doc), sort_keys=True))
    assert outs[0] == outs[1] == outs[2]


def test_bad_thread_count(capsys, monkeypatch):
    monkeypatch.setenv("ENTRES_THREADS", "zero")
    code, _ = run(capsys, "catalog", "--verify-all")
    assert code == 1


def test_obstruct_kagome_preset(capsys):
    code, doc = run(capsys, "obstruct", "--src", "ghz_r", "--dst", "eprD_kagome", "--battery", "koszul",
                    "-r", "5", "-D", "2")
    assert code == 0
    assert doc["result"]["verdict"] == "obstructed"
    assert "6" in json.dumps(doc["result"])
    code, doc = run(capsys, "obstruct", "--src", "ghz_r", "--dst", "eprD_kagome", "--battery", "koszul",
                    "-r", "6", "-D", "2", "--expect", "obstructed")
    assert code == 2


def test_obstruct_files(capsys, tmp_path):
    from entres.hypergraph import fan
    from entres.structure import uniform_structure
    g = fan(3)
    a = _write(tmp_path, "a.json", structure_to_json(uniform_structure(g, w_state(3))))
    b = _write(tmp_path, "b.json", structure_to_json(uniform_structure(g, ghz(2, 3))))
    code, doc = run(capsys, "obstruct", "--src", a, "--dst", b, "--battery", "functional", "--expect", "obstructed")
    assert code == 0 and doc["result"]["verdict"] == "obstructed"
    code, doc = run(capsys, "obstruct", "--src", b, "--dst", a, "--battery", "functional", "--expect", "obstructed")
    assert code == 2


def test_build_materialize_roundtrip(capsys, tmp_path):
    out = str(tmp_path / "s.json")
    code, doc = run(capsys, "build", "--lattice", "square", "--rows", "2", "--cols", "2", "--state", "epr",
                    "--param", "D=2", "--out", out)
    assert code == 0
    first = open(out).read()
    code, doc = run(capsys, "materialize", "--structure", out)
    assert code == 0 and doc["result"]["dims"] == [4, 4, 4, 4] and doc["result"]["terms"] == 16
    code, _ = run(capsys, "build", "--lattice", "square", "--rows", "2", "--cols", "2", "--state", "epr",
                  "--param", "D=2", "--out", out)
    assert open(out).read() == first


def test_contract_and_matchings(capsys, tmp_path):
    s = _write(tmp_path, "s.json", structure_to_json(as_structure(ghz(2, 3))))
    cv = _write(tmp_path, "c.json", {"covectors": [["1", "1"]] * 3})
    code, doc = run(capsys, "contract", "--structure", s, "--covectors", cv)
    assert code == 0 and doc["result"]["value"] == "2"
    code, doc = run(capsys, "contract", "--structure", s, "--covectors", cv, "--plan", "naive")
    assert doc["result"]["value"] == "2"
    bad = _write(tmp_path, "c2.json", {"covectors": [["1", "1"], ["1"], ["1", "1"]]})
    assert run(capsys, "contract", "--structure", s, "--covectors", bad)[0] == 1
    code, doc = run(capsys, "matchings", "--rows", "3", "--cols", "3", "--seed", "4")
    assert code == 0 and doc["result"]["equal"]
    code, doc = run(capsys, "matchings", "--rows", "2", "--cols", "2")
    assert doc["result"]["contracted"] == "7"


def test_rank_bounds_and_stabilizer(capsys):
    code, doc = run(capsys, "rank-bounds", "--state", "epr_triangle", "--param", "n=2")
    assert code == 0 and (doc["result"]["lower"], doc["result"]["upper"]) == (6, 7)
    code, doc = run(capsys, "stabilizer", "--example", "double-w", "--q", "3")
    assert code == 0 and doc["result"]["stabilizer"]
    assert run(capsys, "rank-bounds")[0] == 1


def test_interpolate_construction(capsys):
    code, doc = run(capsys, "interpolate", "--construction", "bini")
    assert code == 0


def test_reports_are_deterministic(capsys):
    a = _strip(run(capsys, "rank-bounds", "--state", "w")[1])
    b = _strip(run(capsys, "rank-bounds", "--state", "w")[1])
    assert a == b


def test_pretty_output(capsys):
    main(["catalog", "--known", "--pretty"])
    out = capsys.readouterr().out
    assert "\n  " in out
    json.loads(out)
