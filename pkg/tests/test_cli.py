import json
import os
import re
import subprocess
import sys

import pytest

from conftest import GOLDEN
from triquot.certio import loads
from triquot.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_237(capsys):
    code, out, _ = run(capsys, "invariants", "2", "3", "7")
    assert code == 0
    assert "hyperbolic" in out and "perfect" in out and "{2,3,7}" in out


def test_invariants_333(capsys):
    code, out, _ = run(capsys, "invariants", "3", "3", "3")
    assert code == 0 and "euclidean" in out and "C3 x C3" in out


def test_invariants_structured_agrees_with_human(capsys):
    _, human, _ = run(capsys, "invariants", "15", "42", "63")
    code, out, _ = run(capsys, "invariants", "15", "42", "63", "--format", "structured")
    doc = json.loads(out)
    assert code == 0
    assert doc["product"] == 39690 and doc["ab_e"] == 21 and doc["l2_set"] == [630]
    assert doc["euler_sum"] == "67/630"
    for key in ("gcd3", "lcm3", "product", "pairwise_sum"):
        assert re.search(rf"\b{doc[key]}\b", human)
    assert "67/630" in human


@pytest.mark.parametrize("argv", [("invariants", "1", "5", "5"), ("invariants", "2", "x", "7"),
                                  ("distinguish", "2", "3", "6", "2", "3", "7"),
                                  ("distinguish", "2", "3", "7"), ("census", "--threads", "0"),
                                  ("bogus",), ()])
def test_input_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(list(argv))
        raise SystemExit(code)
    assert exc.value.code == 2


def test_distinguish_human(capsys):
    code, out, _ = run(capsys, "distinguish", "13", "15", "117", "9", "39", "65")
    assert code == 0
    assert "suppression" in out and "q = 13" in out and "PSL(2,19)" in out


def test_distinguish_identical(capsys):
    code, out, _ = run(capsys, "distinguish", "2", "3", "7", "2", "3", "7")
    assert code == 0 and out.startswith("identical")


def test_distinguish_structured_is_golden(capsys):
    code, out, _ = run(capsys, "distinguish", "13", "15", "117", "9", "39", "65",
                       "--format", "structured")
    assert code == 0
    assert out == open(os.path.join(GOLDEN, "suppression_13_15_117.json")).read()


def test_distinguish_out_file(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, out, _ = run(capsys, "distinguish", "15", "42", "63", "21", "21", "90",
                       "--format", "structured", "--out", str(path))
    assert code == 0 and out == ""
    cert, _, _ = loads(path.read_text())
    assert cert.kind == "smooth-generation"


def test_verify_golden(capsys):
    for name in sorted(os.listdir(GOLDEN)):
        if name.endswith(".json"):
            code, out, _ = run(capsys, "verify", os.path.join(GOLDEN, name))
            assert code == 0 and out.startswith("ok:"), name


def test_verify_tampered_prime(capsys, tmp_path):
    doc = json.load(open(os.path.join(GOLDEN, "suppression_13_15_117.json")))
    doc["data"]["group"]["p"] = 23
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1 and "verification failed" in out
    code, out, _ = run(capsys, "verify", str(path), "--format", "structured")
    assert code == 1 and json.loads(out)["ok"] is False


def test_verify_truncated(capsys, tmp_path):
    text = open(os.path.join(GOLDEN, "suppression_13_15_117.json")).read()
    path = tmp_path / "trunc.json"
    path.write_text(text[:100])
    code, _, err = run(capsys, "verify", str(path))
    assert code == 2 and "invalid JSON" in err
    code, _, _ = run(capsys, "verify", str(tmp_path / "missing.json"))
    assert code == 2


def test_census_tiny(capsys):
    code, out, _ = run(capsys, "census", "--max-product", "4")
    assert code == 0 and "candidate_pairs = 0" in out


def test_census_1000_deterministic(capsys, tmp_path):
    code, out1, _ = run(capsys, "census", "--max-product", "1000", "--out", str(tmp_path / "a"))
    code2, out2, _ = run(capsys, "census", "--max-product", "1000", "--threads", "4",
                         "--out", str(tmp_path / "b"))
    assert code == code2 == 0 and out1 == out2 and "candidate_pairs = 0" in out1
    for name in ("pairs.tsv", "certificates.jsonl", "summary.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_census_structured(capsys):
    code, out, _ = run(capsys, "census", "--max-product", "100000", "--format", "structured")
    doc = json.loads(out)
    assert code == 0 and doc["candidate_pairs"] == 95 and doc["unresolved"] == 0
    _, human, _ = run(capsys, "census", "--max-product", "100000")
    for key, value in doc.items():
        assert f"{key} = {value}" in human


def test_census_resource_limit(capsys, monkeypatch):
    from triquot import census
    from triquot.errors import ResourceLimitError

    def boom(cfg, progress=None):
        raise ResourceLimitError("out of memory", shard=3)

    monkeypatch.setattr(census, "resolve_all", boom)
    code, _, err = run(capsys, "census", "--max-product", "100")
    assert code == 4 and "shard 3" in err


def test_unresolved_exit_3(capsys, monkeypatch):
    from triquot import cli
    from triquot.witness import Unresolved
    monkeypatch.setattr(cli, "distinguish", lambda *a, **k: Unresolved((("l2-split", "x"),)))
    code, out, _ = run(capsys, "distinguish", "13", "15", "117", "9", "39", "65")
    assert code == 3 and out.startswith("unresolved")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "triquot", "invariants", "1", "5", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "triquot", "distinguish", "2", "3", "7", "2", "3",
                           "7"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("identical")
