import ast
import json
import subprocess
import sys
from pathlib import Path

import pytest

import gcfinite.cli as cli
from gcfinite.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_plane_verify(capsys):
    code, doc = run(["plane", "2", "--verify"], capsys)
    assert code == 0 and all(doc["result"]["axioms"].values())
    assert doc["schema_version"] == 1


def test_plane_bad_order_is_usage_error(capsys):
    assert main(["plane", "4"]) == 2


def test_plane_out_file_and_manifest(tmp_path):
    out = tmp_path / "plane13.json"
    assert main(["plane", "13", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["result"]["plane"]["points"]) == 183
    manifest = json.loads((tmp_path / "plane13.json.manifest.json").read_text())
    assert doc["manifest"] == "plane13.json.manifest.json"
    assert manifest["outputs"][0] == str(out)


def test_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["simulate", "gc-fail", "--d", "100", "--n", "5", "--seeds", "3", "--out", str(a)])
    main(["simulate", "gc-fail", "--d", "100", "--n", "5", "--seeds", "3", "--out", str(b)])
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    da.pop("manifest"), db.pop("manifest")
    assert da == db


def test_bracket_fano(capsys):
    code, doc = run(["bracket", "--fano", "--eps", "3/7", "--mode", "exact"], capsys)
    assert code == 0 and doc["result"]["bracketing"]["count"] == 7


def test_decimal_eps_rejected():
    with pytest.raises(SystemExit) as info:
        main(["bracket", "--fano", "--eps", "0.4"])
    assert info.value.code == 2


def test_cover_and_dims(capsys):
    code, doc = run(["cover", "--fano", "--eps", "2/7", "--centers", "external"], capsys)
    assert doc["result"]["covering"]["count"] == 3
    code, doc = run(["dims", "--blocks", "2,3", "--gamma", "1/2"], capsys)
    assert doc["result"]["gamma_dimension"] == 2
    code, doc = run(["dims", "--cube", "3", "--levels", "1/4", "3/4"], capsys)
    assert doc["result"]["boolean_independent"]["size"] == 3


def test_counterexample_verify(tmp_path, capsys):
    csv = tmp_path / "b.csv"
    code, doc = run(["counterexample", "verify", "--nspec", "ceil-inv", "--grid", "0.01:0.33:0.01", "--csv", str(csv)], capsys)
    assert code == 0 and doc["result"]["blowup"]["all_pass"]
    assert csv.read_text().startswith("eps,n_spec,bound,margin")


def test_simulate_gc_fail(capsys):
    code, doc = run(["simulate", "gc-fail", "--d", "10000", "--n", "10", "--seeds", "100", "--min-frequency", "19/20"], capsys)
    assert code == 0 and doc["result"]["gc_failure"]["event_frequency"] >= 0.95


def test_simulate_gc_converge(capsys):
    code, doc = run(["simulate", "gc-converge", "--fano", "--n", "500", "--seeds", "3", "--eps", "3/7"], capsys)
    assert code == 0 and doc["result"]["gc_converge"]["envelope_dominates"]


def test_marczewski_and_alon(capsys):
    code, doc = run(["marczewski", "--n", "6", "--p", "1/3"], capsys)
    assert code == 0 and doc["result"]["check"]["exact"]
    code, doc = run(["alon", "--q", "5", "--k", "2", "--eps", "1/10", "--budget", "2000", "--restarts", "4"], capsys)
    assert code == 0 and doc["result"]["checks"][0]["status"] == "pass"


def test_input_files(tmp_path, capsys):
    f = tmp_path / "cls.json"
    f.write_text(json.dumps({"schema_version": 1, "kind": "function_class", "values": [["0", "1"], ["1", "0"]]}))
    code, doc = run(["bracket", "--input", str(f), "--eps", "1/2"], capsys)
    assert code == 0 and doc["result"]["bracketing"]["count"] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema_version": 1, "kind": "function_class", "values": [["0", "x"]]}')
    assert main(["bracket", "--input", str(bad), "--eps", "1/2"]) == 2
    assert "values[0][1]" in capsys.readouterr().err


def test_cli_has_no_numeric_imports():
    tree = ast.parse(Path(cli.__file__).read_text())
    mods = {a.name.split(".")[0] for n in ast.walk(tree) if isinstance(n, ast.Import) for a in n.names}
    mods |= {n.module.split(".")[0] for n in ast.walk(tree) if isinstance(n, ast.ImportFrom) and n.module and n.level == 0}
    assert not mods & {"numpy", "scipy", "math", "mpmath", "gmpy2"}


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "gcfinite.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "counterexample" in r.stdout
