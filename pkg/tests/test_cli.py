import io
import json

import pytest

from effbounds import cli


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


def run_json(argv):
    code, text = run(argv)
    return code, json.loads(text)


def test_shafarevich_json_fields():
    code, doc = run_json(["shafarevich", "--g", "2", "--q", "2", "--s", "0",
                          "--format", "json"])
    assert code == 0
    assert doc["constants"]["m"] == "5000"
    assert doc["constants"]["d"] == "10"
    assert doc["constants"]["l"] == "19997"
    assert doc["result"]["kind"] == "tower"
    assert {"name", "citation", "magnitude"} <= set(doc["trace"][0])


def test_shafarevich_low_genus_routing_note():
    code, doc = run_json(["shafarevich", "--g", "2", "--q", "1", "--s", "0",
                          "--format", "json"])
    assert code == 0
    assert any("q replaced by 2" in note for note in doc["notes"])
    assert any("q replaced by 2" in t["citation"] for t in doc["trace"])


def test_invalid_params_exit_code():
    code, _ = run(["shafarevich", "--g", "1", "--q", "2", "--s", "0"])
    assert code == 2


def test_bad_flag_exit_code():
    code, _ = run(["shafarevich", "--g", "two", "--q", "2"])
    assert code == 2


def test_mordell_g_prime_field():
    code, doc = run_json(["mordell", "--g", "2", "--q", "2", "--s", "0",
                          "--format", "json"])
    assert code == 0
    assert doc["constants"]["g_prime"] == "34"
    names = [t["name"] for t in doc["trace"]]
    assert "rho_degree_bound" in names and "C(g,q,s)" in names
    assert doc["inner_trace"]  # nested family-count trace is present


def test_mordell_grid_monotone_summary():
    code, doc = run_json(["mordell", "--g", "2", "--q", "2..4", "--s", "0",
                          "--format", "json"])
    assert code == 0
    assert len(doc["records"]) == 3
    orderings = [o["ordering"] for o in doc["summary"]["pairwise"]]
    assert orderings == ["Less", "Less"]


def test_mordell_toy_injection():
    code, doc = run_json(["mordell", "--g", "2", "--q", "2", "--s", "0",
                          "--inject", "S=1,P=1,cover_sum=36", "--format", "json"])
    assert code == 0
    assert doc["result"] == {"kind": "exact", "value": "1224"}


def test_output_schema_stable():
    argv = ["shafarevich", "--g", "2", "--q", "2", "--s", "0", "--format", "json"]
    assert run(argv) == run(argv)


def test_seed_recorded_and_env_fallback(monkeypatch):
    monkeypatch.setenv("BOUNDS_SEED", "777")
    code, doc = run_json(["geom-verify", "--suite", "nondegeneracy",
                          "--format", "json"])
    assert code == 0
    assert doc["config"]["seed"] == 777


def test_geom_verify_subset():
    code, text = run(["geom-verify", "--suite", "recovery", "--suite", "cramer",
                      "--trials", "15", "--seed", "5"])
    assert code == 0
    assert "recovery: pass 15/15" in text
    assert "cramer: pass 15/15" in text


def test_geom_verify_named_curves():
    code, doc = run_json(["geom-verify", "--suite", "matching", "--curves",
                          "twisted-cubic,line", "--format", "json"])
    assert code == 0
    assert doc["suites"][0]["outcome"] == "Distinguished(1)"


def test_geom_verify_recovery_flags():
    code, doc = run_json(["geom-verify", "--suite", "recovery", "--trials", "10",
                          "--degree", "3", "--seed", "4", "--format", "json"])
    assert code == 0
    assert doc["suites"][0]["passed"] == 10


def test_csv_format():
    code, text = run(["shafarevich", "--g", "2", "--q", "2", "--s", "0",
                      "--format", "csv"])
    assert code == 0
    header = text.splitlines()[0]
    assert header == "g,q,s,name,kind,value,height,lo,hi"
    assert any(line.split(",")[3] == "Q" for line in text.splitlines()[1:])


def test_threshold_floor_enforced():
    code, _ = run(["shafarevich", "--g", "2", "--q", "2", "--s", "0",
                   "--exact-threshold-bits", "16"])
    assert code == 2
