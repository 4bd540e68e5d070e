import json
import re
import subprocess
import sys

import pytest

from conftest import ALG_DIR
from siltkit.cli import main


def spec(name):
    return str(ALG_DIR / f"{name}.alg")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name,d,count", [("a2", 3, 12), ("nakayama2", 3, 15), ("a2", 2, 5)])
def test_silt_dot_node_count(capsys, name, d, count):
    code, out, err = run(capsys, "silt", "--spec", spec(name), "--d", str(d), "--format", "dot")
    assert code == 0
    assert out.startswith("digraph")
    nodes = [ln for ln in out.splitlines() if re.match(r"\s*n\d+ \[label=", ln)]
    assert len(nodes) == count
    assert f"{count} elements" in err


def test_silt_json_roundtrip(capsys, tmp_path):
    path = tmp_path / "a2.json"
    code, out, _ = run(capsys, "silt", "--spec", spec("a2"), "--format", "json", "--out", str(path))
    assert code == 0
    assert "12 elements" in out
    doc = json.loads(path.read_text())
    assert len(doc["elements"]) == 12
    assert doc["config"]["d"] == 3


def test_silt_output_deterministic(capsys):
    outs = [run(capsys, "silt", "--spec", spec("nakayama2"), "--format", "json")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_verify_all_passes(capsys):
    code, out, _ = run(capsys, "verify", "--spec", spec("a2"), "--which", "all", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "PASS"
    assert set(report["suites"]) == {"triangle", "duality", "lattice"}
    assert report["suites"]["triangle"]["silting"] == 12
    assert report["suites"]["duality"]["pairs"] == 64


def test_verify_text_d2(capsys):
    code, out, _ = run(capsys, "verify", "--spec", spec("a2"), "--d", "2")
    assert code == 0
    assert out.strip().splitlines()[-1] == "PASS"


def test_tors_p_tors_not_semidistributive(capsys):
    code, out, _ = run(capsys, "tors", "--spec", spec("a2"), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["elements"]) == 12
    assert doc["semidistributive"] is False
    w = doc["witness"]
    assert w is not None and w[3] in ("meet", "join")


def test_tors_d2_all_classes(capsys):
    code, out, _ = run(capsys, "tors", "--spec", spec("a2"), "--d", "2", "--kind", "tors",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["elements"]) == 5
    assert doc["semidistributive"] is True


def test_tors_deterministic(capsys):
    outs = [run(capsys, "tors", "--spec", spec("a2"), "--format", "json")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_corrupted_spec_fails(capsys, tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("field 10007\nvertices 2\narrow a 1 2\nrelation a\n")
    code, _, err = run(capsys, "silt", "--spec", str(bad))
    assert code != 0
    assert "error" in err


def test_missing_spec_fails(capsys, tmp_path):
    code, _, err = run(capsys, "silt", "--spec", str(tmp_path / "nope.alg"))
    assert code == 2


def test_non_prime_field_rejected(capsys):
    code, _, err = run(capsys, "silt", "--spec", spec("a2"), "--prime", "10")
    assert code == 2


def test_infinite_pool_reported(capsys):
    code, _, err = run(capsys, "tors", "--spec", spec("kronecker"), "--pool-cap", "10")
    assert code == 2
    assert "PoolCapExceeded" in err


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "siltkit", "silt", "--spec", spec("a2"), "--d", "2"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0
    assert "5 elements" in r.stdout
