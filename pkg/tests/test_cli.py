import json
import subprocess
import sys

import pytest

from hycone.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


K23 = {"n": 5, "d": ["2", "1", "1", "1", "1", "1", "1", "2", "2", "2"]}


def test_member_violated_with_witness(tmp_path, capsys):
    code, out = run(capsys, "member", "--family", "hyp", "--in", write(tmp_path, "d.json", K23), "--witness")
    data = json.loads(out.out)
    assert code == 1
    assert data["verdict"] == "Violated" and data["violation"] == "2"
    assert data["witness"]["b"] == [-1, -1, 1, 1, 1]


def test_member_accepts_cut(tmp_path, capsys):
    d = {"n": 4, "d": ["1", "1", "1", "0", "0", "0"]}
    for fam in ("hyp", "hypp"):
        code, out = run(capsys, "member", "--family", fam, "--in", write(tmp_path, "d.json", d))
        assert code == 0 and json.loads(out.out) == {"verdict": "Member"}


def test_cuts_and_gen_ineq(capsys):
    code, out = run(capsys, "cuts", "--n", "4")
    assert code == 0 and len(json.loads(out.out)["cuts"]) == 7
    code, out = run(capsys, "cuts", "--n", "4", "--polytope")
    assert len(json.loads(out.out)["cuts"]) == 8
    code, out = run(capsys, "gen-ineq", "--family", "met", "--n", "4")
    assert len(json.loads(out.out)) == 12
    code, out = run(capsys, "gen-ineq", "--family", "hyp", "--n", "5", "--max-abs", "1")
    assert len(json.loads(out.out)) == 2


def test_convert_round_trip(tmp_path, capsys):
    code, out = run(capsys, "cuts", "--n", "4")
    rays = json.loads(out.out)["cuts"]
    cone = {"dim": 6, "rays": [[str(x) for x in r] for r in rays]}
    code, out = run(capsys, "convert", "--in", write(tmp_path, "c.json", cone), "--to", "facets")
    facets = json.loads(out.out)
    assert code == 0 and len(facets["facets"]) == 12
    code, out = run(capsys, "convert", "--in", write(tmp_path, "f.json", {"dim": 6, "facets": facets["facets"]}), "--to", "rays")
    assert sorted(json.loads(out.out)["rays"]) == sorted(facets["rays"])


def test_hull(tmp_path, capsys):
    pts = [[0, 0], [1, 0], [0, 1], [1, 1]]
    code, out = run(capsys, "hull", "--in", write(tmp_path, "p.json", {"points": pts}))
    data = json.loads(out.out)
    assert data["dimension"] == 2 and len(data["facets"]) == 4


def test_max_scale(tmp_path, capsys):
    code, out = run(capsys, "max-scale", "--in", write(tmp_path, "d.json", {"n": 3, "d": ["1", "1", "1"]}))
    assert code == 0 and json.loads(out.out) == {"lambda": "2/3"}
    code, out = run(capsys, "max-scale", "--in", write(tmp_path, "d.json", {"n": 3, "d": ["1", "1", "3"]}))
    assert code == 2 and "not a hypermetric" in out.err


def test_orbit(capsys):
    code, out = run(capsys, "orbit", "--n", "8", "--b", "0,0,0,0,0,-1,1,1")
    data = json.loads(out.out)
    assert data["orbit_size"] == 168 and data["stabilizer"] == 40320 // 168
    code, out = run(capsys, "orbit", "--n", "8", "--b", "0,0,0,0,0,1,1,1", "--switch")
    data = json.loads(out.out)
    assert data["orbit_size"] == 224 and len(data["sym_orbits"]) == 2
    code, out = run(capsys, "orbit", "--n", "3", "--b", "1,1")
    assert code == 2


def test_lift(tmp_path, capsys):
    g = write(tmp_path, "g.json", {"n": 5, "edges": [[0, 3], [3, 1], [1, 2], [2, 4], [4, 0]]})
    f = write(tmp_path, "f.json", {"coeffs": {"0,1": "-1", "0,2": "-1", "1,2": "1"}, "rhs": "0"})
    p = write(tmp_path, "p.json", {"terminals": [0, 1, 2], "paths": {"0,1": [0, 3, 1], "0,2": [0, 4, 2], "1,2": [1, 2]}})
    code, out = run(capsys, "lift", "--graph", g, "--ineq", f, "--paths", p)
    data = json.loads(out.out)
    assert code == 0 and data["valid"] and data["max_over_cuts"] == "0"
    assert len(data["inequality"]["coeffs"]) == 5
    bad = write(tmp_path, "bad.json", {"terminals": [0, 1, 2], "paths": {"0,1": [0, 3, 1], "0,2": [0, 3, 1, 2], "1,2": [1, 2]}})
    code, out = run(capsys, "lift", "--graph", g, "--ineq", f, "--paths", bad)
    assert code == 2


def test_repartition(tmp_path, capsys):
    code, out = run(capsys, "repartition", "--points", write(tmp_path, "w.json", [[0, 0], [1, 0], [0, 1], [1, 1]]))
    data = json.loads(out.out)
    assert data["alpha"] == [1, -1, -1, 1]
    code, out = run(capsys, "repartition", "--points", write(tmp_path, "w.json", [[0, 0], [1, 0], [2, 0], [3, 0]]))
    assert code == 2


def test_verify_and_out_file(tmp_path, capsys):
    dest = tmp_path / "report.tsv"
    code, _ = run(capsys, "--jobs", "2", "verify", "--table", "t4", "--out", str(dest))
    assert code == 0
    assert dest.read_text().startswith("table\trow")
    code, out = run(capsys, "verify", "--table", "t1")
    assert code == 1 and "FAIL" in out.out


def test_input_errors(tmp_path, capsys):
    code, out = run(capsys, "member", "--family", "hyp", "--in", write(tmp_path, "d.json", {"n": 4, "d": ["1"]}))
    assert code == 2 and "error" in out.err
    code, out = run(capsys, "member", "--family", "hyp", "--in", str(tmp_path / "missing.json"))
    assert code == 2
    with pytest.raises(SystemExit) as e:
        main(["member", "--family", "nope", "--in", "x"])
    assert e.value.code == 2


def test_deterministic_output(capsys):
    outs = {run(capsys, "gen-ineq", "--family", "hypp", "--n", "5", "--max-abs", "2")[1].out for _ in range(2)}
    assert len(outs) == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hycone", "cuts", "--n", "3"], capture_output=True, text=True)
    assert r.returncode == 0 and len(json.loads(r.stdout)["cuts"]) == 3
