import json
import shutil
import subprocess
import sys

import pytest

from mlcheck.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_INPUT, EXIT_OK, main
from mlcheck.constructions import diamond6, divisor_lattice, gap_chain5
from mlcheck.corpus import (ManifestError, default_manifest, emit_report, load_manifest, manifest_digest,
                            report_dict, resolve, run_corpus)
from mlcheck.mlat import dump, load

SMALL_MANIFEST = {"sources": [{"kind": "builtin"}, {"kind": "divisors", "from": 2, "to": 40},
                              {"kind": "enumerate", "max_order": 4}]}


def strip_timing(report):
    for p in report["properties"]:
        p.pop("elapsed_ms")
    return report


@pytest.fixture
def d6_file(tmp_path):
    path = tmp_path / "d6.mlat"
    dump(diamond6(), path)
    return path


# -- corpus ----------------------------------------------------------------------------------

def test_default_manifest_members():
    ids = [ident for ident, _ in resolve(default_manifest())]
    assert len(ids) == len(set(ids))
    assert sum(i.startswith("divisors:") for i in ids) == 199
    assert sum(i.startswith("enumerated:") for i in ids) == 36
    assert "ring:Z/16[x]/(x^2+7)" in ids and "ring:Z/4[x]/(x^2,2x)" in ids


def test_manifest_digest_is_order_insensitive_in_keys():
    a = {"sources": [{"kind": "divisors", "from": 2, "to": 3}]}
    b = {"sources": [{"to": 3, "from": 2, "kind": "divisors"}]}
    assert manifest_digest(a) == manifest_digest(b)
    assert manifest_digest(a) != manifest_digest(default_manifest())


def test_json_schema():
    doc = report_dict(run_corpus(SMALL_MANIFEST))
    assert set(doc) == {"manifest_digest", "properties", "verdict"}
    for p in doc["properties"]:
        assert set(p) == {"id", "anchor", "examined", "hypothesis_hits", "violations", "elapsed_ms"}
        assert p["examined"] == 5 + 39 + 10
    assert json.loads(emit_report(run_corpus(SMALL_MANIFEST), "json"))["verdict"] == doc["verdict"] == "pass"


def test_parallel_run_matches_serial():
    serial = strip_timing(report_dict(run_corpus(SMALL_MANIFEST)))
    parallel = strip_timing(report_dict(run_corpus(SMALL_MANIFEST, jobs=2)))
    assert serial == parallel


def test_text_report_lists_every_property():
    run = run_corpus(SMALL_MANIFEST, ["P2.8", "T4.14"])
    text = emit_report(run)
    assert "P2.8" in text and "T4.14" in text and "verdict: pass" in text
    with pytest.raises(ValueError):
        emit_report(run, "yaml")


def test_manifest_files(tmp_path, d6_file):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"sources": [{"kind": "file", "path": "d6.mlat"}]}))
    members = resolve(load_manifest(m))
    assert members[0][0].endswith("d6.mlat") and members[0][1].size == 6
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    with pytest.raises(ManifestError):
        load_manifest(bad)
    with pytest.raises(ManifestError):
        resolve({"sources": [{"kind": "mystery"}]})
    with pytest.raises(ManifestError):
        resolve({"sources": [{"kind": "builtin", "names": ["nope"]}]})


# -- CLI ---------------------------------------------------------------------------------------

def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys, tmp_path, d6_file):
    code, out, _ = run(capsys, "validate", d6_file)
    assert code == EXIT_OK and "6 elements" in out
    bad = tmp_path / "bad.mlat"
    # m * m = 1 lies above m
    bad.write_text("mlat 1\nelements 3\norder\n0 1\n1 2\nmul\n0 0 0\n0 2 1\n0 1 2\n")
    code, out, _ = run(capsys, "validate", bad)
    assert code == EXIT_FAIL and "mul-below-meet" in out
    garbled = tmp_path / "garbled.mlat"
    garbled.write_text("hello\n")
    assert run(capsys, "validate", garbled)[0] == EXIT_INPUT
    assert run(capsys, "validate", tmp_path / "missing.mlat")[0] == EXIT_INPUT


def test_classify(capsys, d6_file):
    code, out, _ = run(capsys, "classify", d6_file)
    assert code == EXIT_OK and "quasi-local=True" in out
    code, out, _ = run(capsys, "classify", d6_file, "--element", "b", "--json")
    doc = json.loads(out)
    assert doc["is_one_absorbing"] and not doc["is_prime"] and doc["radical"] == "d"
    code, out, _ = run(capsys, "classify", d6_file, "--json")
    assert set(json.loads(out)) == {"elements", "profile", "factorization"}
    assert run(capsys, "classify", d6_file, "--element", "zz")[0] == EXIT_INPUT


def test_factorize(capsys, tmp_path):
    path = tmp_path / "d240.mlat"
    dump(divisor_lattice(240), path)
    code, out, _ = run(capsys, "factorize", path, "--element", "15", "--class", "oa")
    assert code == EXIT_OK and out.strip() in {"15 = 3 * 5", "15 = 5 * 3"}
    code, out, _ = run(capsys, "factorize", path, "--element", "8", "--class", "prime")
    assert code == EXIT_OK and out.strip() == "8 = 2 * 2 * 2"
    gap = tmp_path / "gap.mlat"
    dump(gap_chain5(), gap)
    code, out, _ = run(capsys, "factorize", gap, "--element", "u", "--class", "ta")
    assert code == EXIT_FAIL and "no ta-factorization" in out
    assert run(capsys, "factorize", path, "--element", "15", "--class", "cube")[0] == EXIT_INPUT


def test_corpus_commands(capsys, tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps(SMALL_MANIFEST))
    code, out, _ = run(capsys, "corpus", "run", "--manifest", m, "--properties", "P2.8,T4.13", "--format", "json")
    assert code == EXIT_OK and [p["id"] for p in json.loads(out)["properties"]] == ["P2.8", "T4.13"]
    assert run(capsys, "corpus", "run", "--manifest", m, "--properties", "P0")[0] == EXIT_INPUT
    assert run(capsys, "corpus", "run", "--manifest", tmp_path / "none.json")[0] == EXIT_INPUT
    field_only = tmp_path / "f.json"
    field_only.write_text(json.dumps({"sources": [{"kind": "divisors", "from": 6, "to": 6}]}))
    assert run(capsys, "corpus", "run", "--manifest", field_only, "--properties", "P2.8")[0] == EXIT_FAIL
    code, out, _ = run(capsys, "corpus", "list")
    assert code == EXIT_OK and "T4.15" in out


def test_enumerate_command(capsys, tmp_path):
    out_dir = tmp_path / "lat"
    code, out, _ = run(capsys, "enumerate", "--max-order", 4, "--out", out_dir)
    assert code == EXIT_OK and "total 10" in out
    files = sorted(out_dir.glob("*.mlat"))
    assert len(files) == 10 and load(files[-1]).size == 4
    assert run(capsys, "enumerate", "--max-order", 5, "--out", out_dir, "--budget", 5)[0] == EXIT_BUDGET
    assert run(capsys, "enumerate", "--max-order", 9, "--out", out_dir)[0] == EXIT_INPUT


def test_ring_command(capsys, tmp_path):
    path = tmp_path / "r.mlat"
    code, out, _ = run(capsys, "ring", "--mod", 16, "--poly", "1,0,4", "--out", path)
    assert code == EXIT_OK and "19 ideals" in out and load(path).size == 19
    code, out, _ = run(capsys, "ring", "--mod", 4, "--poly", "1,0,0", "--rel", "2,0", "--out", path)
    assert code == EXIT_OK and "6 ideals" in out
    code, out, _ = run(capsys, "ring", "--zn", 36, "--out", path)
    assert code == EXIT_OK and load(path).size == 9
    assert run(capsys, "ring", "--mod", 16, "--out", path)[0] == EXIT_INPUT
    assert run(capsys, "ring", "--mod", 16, "--poly", "2,0,4", "--out", path)[0] == EXIT_INPUT
    assert run(capsys, "ring", "--mod", 16, "--poly", "one", "--out", path)[0] == EXIT_INPUT


def test_hunt_command(capsys):
    code, out, _ = run(capsys, "hunt", "--conjecture", "meet-of-OA-is-OA")
    assert code == EXIT_OK and "counterexample" in out and "divisors:10" in out
    code, out, _ = run(capsys, "hunt", "--conjecture", "prime-implies-oa", "--max-order", 4)
    assert code == EXIT_OK and out.startswith("no counterexample")
    assert run(capsys, "hunt", "--conjecture", "prime-implies-oa", "--budget", 3)[0] == EXIT_BUDGET
    assert run(capsys, "hunt", "--conjecture", "pigs-fly")[0] == EXIT_INPUT


def test_usage_errors(capsys):
    assert run(capsys)[0] == EXIT_INPUT
    assert run(capsys, "frobnicate")[0] == EXIT_INPUT


def test_size_cap_environment(capsys, monkeypatch, tmp_path, d6_file):
    monkeypatch.setenv("MLCHECK_SIZE_CAP", "4")
    assert run(capsys, "classify", d6_file)[0] == EXIT_INPUT


@pytest.mark.skipif(shutil.which("mlcheck") is None, reason="console script not installed")
def test_console_script(d6_file):
    proc = subprocess.run(["mlcheck", "validate", str(d6_file)], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("ok")
    proc = subprocess.run([sys.executable, "-m", "mlcheck.cli", "validate", str(d6_file)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
