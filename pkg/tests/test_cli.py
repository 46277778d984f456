import json
import subprocess
import sys

import pytest

from proact.cli import main
from proact.serialize import dumps, loads

Z2 = {"catalog": "Z2", "kind": "group"}
Z3 = {"catalog": "Z3", "kind": "group"}

GROUP_ACTION = {
    "type": "group-action",
    "acting": {"constructor": "constant", "structure": Z2},
    "carrier": {"constructor": "vector", "p": 3, "stable_from": 3},
    "gamma": {"shift": 0},
    "chi": {"shift": 0},
    # Z/2 acts on (Z/3)^n by negation; one table per level until the tower is constant
    "tables": [
        [[0], [0]],
        [[0, 1, 2], [0, 2, 1]],
        [list(range(9)), [(-x) % 3 * 3 + (-y) % 3 for x in range(3) for y in range(3)]],
        [list(range(27)), [(-x) % 3 * 9 + (-y) % 3 * 3 + (-z) % 3 for x in range(3) for y in range(3) for z in range(3)]],
    ],
}

RING_ACTION = {
    "type": "ring-action",
    "acting": {"constructor": "constant", "structure": {"catalog": "Z4", "kind": "ring"}},
    "carrier": {"constructor": "constant", "structure": {"catalog": "Z4", "kind": "ring"}},
    "left": [[[(a * b) % 4 for b in range(4)] for a in range(4)]],
    "right": [[[(a * b) % 4 for b in range(4)] for a in range(4)]],
}


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(dumps(doc), encoding="utf-8")
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_towers(tmp_path, capsys):
    doc = {"type": "towers", "towers": {"two": {"constructor": "cyclic-2-power"}, "v": {"constructor": "vector", "p": 2}}}
    code, out, _ = run(["validate", write(tmp_path, "t.json", doc), "--depth", "4"], capsys)
    assert code == 0
    assert loads(out)["status"] == "verified"


def test_validate_reports_bad_bond_level(tmp_path, capsys):
    tower = {
        "kind": "group",
        "structures": [Z2, {"catalog": "Z4", "kind": "group"}],
        "levels": [0, 1, 1],
        # the second bond swaps 1 and 2, which is not a homomorphism of Z/4
        "bonds": [[0, 1, 0, 1], [0, 2, 1, 3]],
    }
    code, out, err = run(["validate", write(tmp_path, "t.json", {"type": "towers", "towers": {"t": tower}})], capsys)
    assert code == 1
    assert loads(out)["failures"][0][0] == 1
    assert "level 1" in err


def test_validate_group_action(tmp_path, capsys):
    code, _, _ = run(["validate", write(tmp_path, "a.json", GROUP_ACTION), "--depth", "4"], capsys)
    assert code == 0


def test_hom_classes(tmp_path, capsys):
    doc = {
        "type": "hom",
        "source": {"constructor": "constant", "structure": {"catalog": "S3"}},
        "target": {"constructor": "constant", "structure": Z2},
    }
    code, out, _ = run(["hom", write(tmp_path, "h.json", doc), "--bound", "3"], capsys)
    assert code == 0
    res = loads(out)
    assert res["count"] == 2 and res["status"] == "exact"


def test_hom_truncated_is_inconclusive(tmp_path, capsys):
    doc = {"type": "hom", "source": {"constructor": "cyclic-2-power"}, "target": {"constructor": "constant", "structure": Z2}}
    code, out, _ = run(["hom", write(tmp_path, "h.json", doc), "--bound", "3"], capsys)
    assert code == 2 and loads(out)["count"] == 2


def test_strictify_then_verify(tmp_path, capsys):
    cert = str(tmp_path / "cert.json")
    code, _, _ = run(["strictify-group", write(tmp_path, "a.json", GROUP_ACTION), "--depth", "5", "--out", cert], capsys)
    assert code == 0
    code, out, _ = run(["verify", cert], capsys)
    assert code == 0 and loads(out)["status"] == "verified"


def test_verify_corrupted_certificate(tmp_path, capsys):
    cert = str(tmp_path / "cert.json")
    run(["strictify-group", write(tmp_path, "a.json", GROUP_ACTION), "--depth", "5", "--out", cert], capsys)
    doc = json.loads(open(cert, encoding="utf-8").read())
    back = doc["maps"]["carrier"]["back"][2]
    back[1], back[2] = back[2], back[1]
    code, out, err = run(["verify", write(tmp_path, "bad.json", doc)], capsys)
    assert code == 1
    assert loads(out)["failures"][0][0] == 2
    assert "level 2" in err


def test_verify_beyond_depth_is_inconclusive(tmp_path, capsys):
    cert = str(tmp_path / "cert.json")
    run(["strictify-group", write(tmp_path, "a.json", GROUP_ACTION), "--depth", "3", "--out", cert], capsys)
    code, _, _ = run(["verify", cert, "--depth", "6"], capsys)
    assert code == 2


@pytest.mark.parametrize("flavor", ["ring", "cring", "rng", "crng"])
def test_strictify_ring_flavors(tmp_path, capsys, flavor):
    code, out, _ = run(["strictify-ring", write(tmp_path, "r.json", RING_ACTION), "--flavor", flavor, "--depth", "3"], capsys)
    assert code == 0
    assert loads(out)["type"] == "certificate"


def test_algebra_flavor_without_scalars(tmp_path, capsys):
    code, _, err = run(["strictify-ring", write(tmp_path, "r.json", RING_ACTION), "--flavor", "alg", "--depth", "3"], capsys)
    assert code == 1 and "scalar" in err


def test_algebra_flavor_with_scalars(tmp_path, capsys):
    doc = dict(RING_ACTION, scalars=[[True, True, True, True]])
    code, _, _ = run(["strictify-ring", write(tmp_path, "r.json", doc), "--flavor", "alg", "--depth", "3"], capsys)
    assert code == 0


def test_parse_error_position(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text('{"version": 1,\n "type": "towers" "towers": {}}\n', encoding="utf-8")
    code, _, err = run(["validate", str(p)], capsys)
    assert code == 1
    assert "line 2, column 19" in err


def test_wrong_document_type(tmp_path, capsys):
    code, _, err = run(["verify", write(tmp_path, "a.json", GROUP_ACTION)], capsys)
    assert code == 1 and "certificate" in err


def test_unsupported_version(tmp_path, capsys):
    p = tmp_path / "v.json"
    p.write_text('{"version": 7, "type": "towers", "towers": {}}', encoding="utf-8")
    code, _, _ = run(["validate", str(p)], capsys)
    assert code == 1


def test_level_cap_reports_inconclusive(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PROACT_LEVEL_CAP", "5")
    code, _, err = run(["strictify-group", write(tmp_path, "a.json", GROUP_ACTION), "--depth", "8"], capsys)
    assert code == 2 and "level" in err


def test_lie_demo(capsys):
    code, out, _ = run(["demo", "lie-counterexample", "--p", "2", "--depth", "3"], capsys)
    assert code == 0
    doc = loads(out)
    assert doc["confirmed"] and doc["object_axioms"] == "verified"


def test_order_n_demo_is_deterministic(capsys):
    code, first, _ = run(["demo", "order-n", "--n", "3", "--depth", "4"], capsys)
    assert code == 0
    _, second, _ = run(["demo", "order-n", "--n", "3", "--depth", "4"], capsys)
    assert first == second
    doc = loads(first)
    assert doc["orders_divide_n"] and doc["status"] == "verified"


def test_module_entry_point(tmp_path):
    path = write(tmp_path, "t.json", {"type": "towers", "towers": {"c": {"constructor": "cyclic-2-power"}}})
    res = subprocess.run([sys.executable, "-m", "proact", "validate", path, "--depth", "3"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.endswith("\n") and loads(res.stdout)["status"] == "verified"
