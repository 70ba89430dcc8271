import io
import json
import subprocess
import sys

import pytest

from cubepaths.cli import main
from cubepaths.flownet import PathFamily, check_path_family
from cubepaths.jsonio import parse_set


def run(argv, monkeypatch=None):
    out = io.StringIO()
    code = main(argv, stdout=out)
    return code, out.getvalue()


def test_boundary_example():
    code, text = run(["boundary", "--n", "2", "--set", "[[ ],[1]]", "--kind", "edge", "--directed"])
    assert code == 0 and json.loads(text)["size"] == 2


@pytest.mark.parametrize("kind,size", [("vertex", 2), ("surface", 2), ("h", 4)])
def test_boundary_kinds(kind, size):
    code, text = run(["boundary", "--n", "2", "--set", "[[],[1]]", "--kind", kind, "--list"])
    obj = json.loads(text)
    assert code == 0 and obj["size"] == size
    assert len(parse_set(obj["members"], 2)) == size


def test_boundary_accepts_hex_masks():
    code, text = run(["boundary", "--n", "2", "--set", '["0x0","0x1"]', "--kind", "edge", "--directed"])
    assert code == 0 and json.loads(text)["size"] == 2


def test_boundary_edge_listing_round_trips():
    code, text = run(["boundary", "--n", "3", "--set", "[[],[1],[1,2]]", "--kind", "edge", "--list"])
    obj = json.loads(text)
    assert len(obj["edges"]) == obj["size"]
    for e in obj["edges"]:
        u, v = e["u"], e["v"]
        assert set(u) < set(v) and len(v) == len(u) + 1


def test_bounds_examples():
    code, text = run(["bounds", "b", "--n", "4", "--x", "5"])
    obj = json.loads(text)
    assert code == 0 and obj["value"] == "6" and obj["rational"] == "6/1"
    obj = json.loads(run(["bounds", "e", "--n", "4", "--x", "4"])[1])
    assert obj["value"] == "8"
    obj = json.loads(run(["bounds", "s", "--n", "3", "--x", "1"])[1])
    assert obj["rational"].endswith("/1") or "/" in obj["rational"]


def test_bounds_out_of_range_is_input_error(capsys):
    code, _ = run(["bounds", "e", "--n", "3", "--x", "9"])
    assert code == 2
    assert "error" in json.loads(capsys.readouterr().err)


def test_verify_example_exits_zero(capsys):
    code, text = run(["verify", "--theorem", "diredges", "--n", "3", "--exhaustive"])
    lines = text.splitlines()
    assert code == 0 and lines
    for line in lines:
        cert = json.loads(line)
        assert cert["theorem_id"] == "diredges" and cert["verdict"] == "pass"
    summary = json.loads(capsys.readouterr().err)
    assert summary == {"certificates": len(lines), "failures": 0}


def test_verify_random_is_byte_identical():
    argv = ["verify", "--theorem", "bledgesfull", "--n", "4", "--random", "20", "--seed", "7"]
    assert run(argv)[1] == run(argv)[1]


def test_verify_writes_jsonl_file(tmp_path):
    out = tmp_path / "certs.jsonl"
    code, text = run(["verify", "--theorem", "matchings", "--n", "3", "--exhaustive", "--out", str(out)])
    assert code == 0 and text == ""
    lines = out.read_text().splitlines()
    assert len(lines) == 163
    assert all(json.loads(l)["verdict"] == "pass" for l in lines)


def test_verify_failure_exit_one(tmp_path, monkeypatch):
    import dataclasses

    from cubepaths import verify

    thm = verify.THEOREMS["edgeiso"]
    monkeypatch.setitem(verify.THEOREMS, "edgeiso", dataclasses.replace(thm, check=lambda inst: ({}, False)))
    monkeypatch.chdir(tmp_path)
    code, text = run(["verify", "--theorem", "edgeiso", "--n", "1", "--exhaustive", "--fail-fast"])
    assert code == 1
    assert len(text.splitlines()) == 1 and json.loads(text)["verdict"] == "fail"
    assert (tmp_path / "cubepaths-failures.jsonl").read_text().strip() == text.strip()


def test_verify_cap_is_input_error(capsys):
    code, _ = run(["verify", "--theorem", "edgelemma", "--n", "4", "--exhaustive"])
    assert code == 2
    assert "capped" in json.loads(capsys.readouterr().err)["error"]


def test_verify_unknown_theorem(capsys):
    code, _ = run(["verify", "--theorem", "nope", "--n", "3"])
    assert code == 2


def test_negative_control_flag():
    code, text = run(["verify", "--negative-control"])
    obj = json.loads(text)
    assert code == 0 and obj["strict"] > 0


def test_compress_json():
    inst = {"n": 3, "A": [[]], "B": [[1, 2, 3]], "S": [[], [1, 2]]}
    code, text = run(["compress", "--json", json.dumps(inst)])
    obj = json.loads(text)
    assert code == 0
    S = parse_set(obj["S'"], 3)
    assert S.bits & 1 and not S.bits & 128
    for step in obj["trace"]:
        assert step["after"] <= step["before"]


def test_compress_precondition_witness(capsys):
    inst = {"n": 2, "A": [[1]], "B": [[1, 2]], "S": [[1]]}
    code, _ = run(["compress", "--json", json.dumps(inst)])
    assert code == 2
    assert json.loads(capsys.readouterr().err)["error"]


def test_compress_from_file(tmp_path):
    path = tmp_path / "inst.json"
    path.write_text(json.dumps({"n": 3, "A": [[]], "B": [[1, 2, 3]], "S": [[], [3], [1, 3]], "mode": "vertex"}))
    code, text = run(["compress", "--input", str(path)])
    assert code == 0 and "S'" in json.loads(text)


@pytest.mark.parametrize("mode", ["edge", "vertex"])
@pytest.mark.parametrize("directed", [False, True])
def test_paths_round_trip(mode, directed):
    inst = {"n": 3, "A": [[], [1]], "B": [[2, 3], [1, 2, 3]], "mode": mode, "directed": directed}
    code, text = run(["paths", "--json", json.dumps(inst)])
    obj = json.loads(text)
    assert code == 0 and obj["count"] == len(obj["paths"]) == obj["cut"]["size"]
    A, B = parse_set(inst["A"], 3), parse_set(inst["B"], 3)
    paths = tuple(tuple(parse_set([v], 3).bits.bit_length() - 1 for v in p) for p in obj["paths"])
    kind = "edge-disjoint" if mode == "edge" else "vertex-disjoint-interiors"
    check_path_family(PathFamily(paths, kind, directed), A, B)
    assert A.issubset(parse_set(obj["cut"]["S"], 3))


def test_paths_bad_instances(capsys):
    assert run(["paths", "--json", "{not json"])[0] == 2
    assert run(["paths", "--json", json.dumps({"n": 2, "A": [[]], "B": [[]]})])[0] == 2
    assert run(["paths", "--json", json.dumps({"n": 2, "A": [[5]], "B": [[1]]})])[0] == 2
    assert run(["paths"])[0] == 2


def test_unknown_subcommand_exits_two():
    proc = subprocess.run([sys.executable, "-m", "cubepaths", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 2 and "usage" in proc.stderr


def test_module_entry_point_matches_main():
    proc = subprocess.run([sys.executable, "-m", "cubepaths", "bounds", "b", "--n", "4", "--x", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == run(["bounds", "b", "--n", "4", "--x", "5"])[1]
