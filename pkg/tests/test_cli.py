import json
import subprocess
import sys

import pytest

from khtorus.cache import HomologyCache, groups_to_homology, homology_to_groups
from khtorus.cli import main
from khtorus.integral_homology import torus_homology


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv("KHTORUS_CACHE_DIR", raising=False)


def test_homology_json(capsys):
    code, out, _ = run(capsys, "homology", "--n", "2", "--m", "3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1 and doc["normalization"] == {"n_minus": 0, "n_plus": 3}
    assert {"h": 3, "q": 7, "free_rank": 0, "torsion": [2]} in doc["groups"]
    assert [(g["q"], g["h"]) for g in doc["groups"]] == sorted((g["q"], g["h"]) for g in doc["groups"])


def test_homology_table_and_slice(capsys):
    code, out, _ = run(capsys, "homology", "--n", "3", "--m", "2")
    assert code == 0 and "Z/2" in out
    code, out, _ = run(capsys, "homology", "--n", "2", "--m", "2", "--q", "4", "--format", "json")
    assert json.loads(out)["groups"] == [{"h": 2, "q": 4, "free_rank": 1, "torsion": []}]


def test_json_is_byte_stable_across_workers(capsys):
    outs = set()
    for w in ("1", "2", "3"):
        _, out, _ = run(capsys, "homology", "--n", "3", "--m", "4", "--format", "json",
                        "--workers", w)
        outs.add(out)
    assert len(outs) == 1


def test_exit_codes(capsys):
    assert run(capsys, "homology", "--n", "3")[0] == 2
    assert run(capsys, "homology", "--n", "1", "--m", "2")[0] == 2
    assert run(capsys, "homology", "--n", "2", "--m", "30")[0] == 2
    assert run(capsys, "homology", "--n", "2", "--m", "3", "--workers", "0")[0] == 2
    assert run(capsys, "stabilize", "--n", "3", "--a", "3", "--k-max", "0")[0] == 2


def test_stabilize_commands(capsys):
    code, out, _ = run(capsys, "stabilize", "--n", "3", "--a", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["m"] == 2 and doc["ok"]
    assert doc["reports"][0]["verdict"] == "equal"
    code, out, _ = run(capsys, "stabilize", "--n", "3", "--a", "3", "--m", "1")
    assert code == 0 and "bound_unsatisfied" in out and "NOT acyclic" in out


def test_ladder_command(capsys):
    code, out, _ = run(capsys, "ladder", "--n", "3", "--m", "1", "--a", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["a_0"] == 5
    assert [s["alpha_i"] for s in doc["steps"]] == [-3, -1]


def test_limit_command(capsys):
    code, out, _ = run(capsys, "limit", "--n", "2", "--j", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["closed_form"] == "Moore(Z/2, 3)"
    assert doc["groups"] == [{"h": 3, "free_rank": 0, "torsion": [2]}]


def test_limit_verification_failure_exits_one(capsys, monkeypatch):
    import khtorus.limits as lim

    monkeypatch.setattr(lim, "_column", lambda n, m, q, sign, mc: {m: None})
    assert run(capsys, "limit", "--n", "2", "--j", "4")[0] == 1


def test_cache_round_trip(tmp_path, capsys):
    code, first, _ = run(capsys, "homology", "--n", "2", "--m", "5", "--format", "json",
                         "--cache-dir", str(tmp_path))
    files = list(tmp_path.glob("*.json"))
    assert code == 0 and len(files) == 1
    code, second, _ = run(capsys, "homology", "--n", "2", "--m", "5", "--format", "json",
                          "--cache-dir", str(tmp_path))
    assert first == second


def test_cache_rejects_tampered_entries(tmp_path):
    cache = HomologyCache(tmp_path)
    H = torus_homology(2, 3)
    p = cache.write(2, 3, H)
    assert cache.read(2, 3) == H
    doc = json.loads(p.read_text())
    doc["payload"]["groups"][0]["free_rank"] += 1
    p.write_text(json.dumps(doc))
    assert cache.read(2, 3) is None
    p.write_text("not json")
    assert cache.read(2, 3) is None
    assert HomologyCache(tmp_path, "after").read(2, 3) is None
    assert not list(tmp_path.glob("*.tmp"))


def test_corrupted_cache_is_recomputed(tmp_path, capsys):
    cache = HomologyCache(tmp_path)
    p = cache.write(2, 3, torus_homology(2, 2))
    doc = json.loads(p.read_text())
    doc["digest"] = "0" * 64
    p.write_text(json.dumps(doc))
    _, out, _ = run(capsys, "homology", "--n", "2", "--m", "3", "--format", "json",
                    "--cache-dir", str(tmp_path))
    assert groups_to_homology(json.loads(out)["groups"]) == torus_homology(2, 3)
    assert cache.read(2, 3) == torus_homology(2, 3)


def test_groups_round_trip():
    H = torus_homology(3, 4)
    assert groups_to_homology(homology_to_groups(H)) == H


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "khtorus", "homology", "--n", "2", "--m", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "Kh(T(2,1))" in proc.stdout


@pytest.mark.slow
def test_golden_suite_command_passes(capsys):
    code, out, _ = run(capsys, "paper-check")
    assert code == 0 and "12/12 checks passed" in out


def test_numpy_fallback_gives_identical_output():
    import os

    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, KHTORUS_DISABLE_NUMBA=flag)
        proc = subprocess.run([sys.executable, "-m", "khtorus", "homology", "--n", "3", "--m", "4",
                               "--format", "json"], capture_output=True, text=True, env=env,
                              check=True)
        outs.append(proc.stdout)
    assert outs[0] == outs[1]
