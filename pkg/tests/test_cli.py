import json
import os
import subprocess
import sys

import pytest

from artsha.cli import main
from artsha.pipeline import SCHEMA


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lfun_text_and_json(tmp_path, capsys):
    code, out, _ = run(["lfun", "--q", "7", "--a", "1", "--out", str(tmp_path)], capsys)
    assert code == 0 and "degree              24" in out
    payload = json.loads((tmp_path / "lfun_q7_a1.json").read_text())
    assert payload["schema"] == SCHEMA
    assert payload["l_polynomial"]["coeffs"][:3] == ["1", "-42", "917"]
    v = payload["verification"]
    assert v["degree"] == {"value": "24", "provenance": "exact"}
    assert v["functional_equation_sign"]["value"] == "1"
    assert v["riemann_hypothesis"]["certified"]["value"] is True
    assert payload["field"]["modulus"] == [0, 1]
    assert payload["hypothesis"] == "p>=7"


def test_lfun_degree_192(capsys):
    code, out, _ = run(["lfun", "--q", "7", "--a", "2", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["verification"]["degree"]["value"] == "192"


def test_verify_exits_zero(capsys):
    code, out, _ = run(["verify", "--q", "7", "--a", "1"], capsys)
    assert code == 0
    assert out.count("PASS") == 7 and "FAIL" not in out


def test_sha_table(capsys):
    code, out, _ = run(["sha", "--q", "7", "--a", "1"], capsys)
    assert code == 0 and "28561 (yes)" in out and "dim Sha 0" in out


def test_discrepancy_and_angles_csv(tmp_path, capsys):
    code, out, _ = run(["discrepancy", "--q", "7", "--a", "3", "--format", "csv",
                        "--out", str(tmp_path)], capsys)
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "q,a,places,star_discrepancy,bound_scale,bound_ratio"
    assert row.startswith("7,3,112,0.1054174811")
    code, out, _ = run(["angles", "--q", "7", "--a", "2", "--format", "csv"], capsys)
    lines = out.strip().splitlines()
    assert lines[0] == "q,a,place,beta_coords,size,theta" and len(lines) == 22


def test_sweep_outputs(tmp_path, capsys):
    code, out, _ = run(["sweep", "--q", "7", "--a-max", "2", "--out", str(tmp_path)], capsys)
    assert code == 0 and "fitted constants" in out
    names = sorted(os.listdir(tmp_path))
    assert names == ["plot_sweep_q7_a1-2.py", "sweep_q7_a1-2.csv", "sweep_q7_a1-2.json"]
    compile((tmp_path / names[0]).read_text(), names[0], "exec")
    payload = json.loads((tmp_path / names[2]).read_text())
    assert [r["a"] for r in payload["rows"]] == ["1", "2"]


def test_small_characteristic(capsys):
    code, _, err = run(["lfun", "--q", "5"], capsys)
    assert code == 2 and json.loads(err)["error"] == "invalid-argument"
    code, out, _ = run(["lfun", "--q", "5", "--allow-small-char", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["hypothesis"] == "out-of-hypothesis"


def test_bad_arguments(capsys):
    code, _, err = run(["sweep", "--q", "7"], capsys)
    assert code == 2 and "a-max" in err
    code, _, err = run(["sha", "--q", "7", "--format", "csv"], capsys)
    assert code == 2
    with pytest.raises(SystemExit):
        main(["nonsense", "--q", "7"])


def test_verification_failure_exit_code(monkeypatch, capsys):
    from artsha import pipeline

    def broken(cfg):
        raise AssertionError("forced")

    monkeypatch.setattr(pipeline, "run_lfun", broken)
    code, _, err = run(["lfun", "--q", "7"], capsys)
    assert code == 1 and json.loads(err)["error"] == "verification-failed"


def test_module_entry_point_is_deterministic(tmp_path):
    outs = []
    for name in ("r1", "r2"):
        d = tmp_path / name
        subprocess.run([sys.executable, "-m", "artsha", "sha", "--q", "7", "--a", "1",
                        "--out", str(d), "--format", "json"], check=True, capture_output=True)
        outs.append((d / "sha_q7_a1.json").read_bytes())
    assert outs[0] == outs[1]
