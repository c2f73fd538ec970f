"""命令行：子命令、输出文件与退出码"""

import csv
import json

import pytest

import app


def _run(*argv):
    return app.main(list(argv))


def test_teleport_ghz_writes_transcripts(tmp_path):
    out = tmp_path / "ghz.json"
    assert _run("teleport", "--scheme", "ghz", "--alpha", "0.6", "--beta", "0.8", "--output", str(out)) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert len(payload["transcripts"]) == 8
    assert all(t["fidelity"] == pytest.approx(1.0, abs=1e-10) for t in payload["transcripts"])


def test_teleport_tight_basis_state(output_dir):
    assert _run("teleport", "--scheme", "tight", "--alpha", "1", "--beta", "0") == 0
    assert (output_dir / "teleport_tight.json").exists()


def test_teleport_nparty_default_width(tmp_path):
    out = tmp_path / "nparty.json"
    assert _run("teleport", "--scheme", "nparty", "--n", "4", "--alpha", "0.6", "--beta", "0.8",
                "--output", str(out)) == 0
    assert len(json.loads(out.read_text(encoding="utf-8"))["transcripts"]) == 16


def test_teleport_general_state_reports_failure(tmp_path):
    out = tmp_path / "negative.json"
    code = _run("teleport", "--scheme", "ghz", "--state", "general:0.5,0.5,0.5,0.5", "--output", str(out))
    assert code == 1
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["negative_check"]["applicable"]
    assert payload["negative_check"]["min_fidelity"] < 1 - 1e-6


def test_sample_mode_without_seed_is_usage_error(tmp_path):
    code = _run("teleport", "--scheme", "ghz", "--alpha", "0.6", "--beta", "0.8", "--mode", "sample",
                "--output", str(tmp_path / "x.json"))
    assert code == 2


def test_sample_mode_is_reproducible(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for out in (first, second):
        assert _run("teleport", "--scheme", "ghz", "--alpha", "0.6", "--beta", "0.8", "--mode", "sample",
                    "--seed", "42", "--output", str(out)) == 0
    assert first.read_bytes() == second.read_bytes()


def test_nonlocal_variant_requires_permission(tmp_path):
    base = ["teleport", "--scheme", "ghz", "--alpha", "0.6", "--beta", "0.8", "--nonlocal-variant",
            "--output", str(tmp_path / "nl.json")]
    assert _run(*base) == 2
    assert _run(*base, "--nonlocal-allowed") == 0


def test_unnormalized_state_is_usage_error(tmp_path):
    assert _run("teleport", "--scheme", "tight", "--alpha", "0.6", "--beta", "0.7",
                "--output", str(tmp_path / "x.json")) == 2


def test_densecode_single_message(tmp_path):
    out = tmp_path / "dense.json"
    assert _run("densecode", "--scheme", "ghz", "--message", "101", "--output", str(out)) == 0
    results = json.loads(out.read_text(encoding="utf-8"))["results"]
    assert [r["decoded"] for r in results] == ["101"]


def test_densecode_all_messages(tmp_path):
    out = tmp_path / "dense.json"
    assert _run("densecode", "--scheme", "nparty", "--n", "4", "--output", str(out)) == 0
    assert len(json.loads(out.read_text(encoding="utf-8"))["results"]) == 16


def test_densecode_nparty_requires_n(tmp_path):
    assert _run("densecode", "--scheme", "nparty", "--output", str(tmp_path / "x.json")) == 2


def test_densecode_modified(tmp_path):
    out = tmp_path / "modified.json"
    assert _run("densecode", "--scheme", "modified", "--n", "4", "--k", "1", "--width", "2",
                "--output", str(out)) == 0


def test_teleclone(tmp_path):
    out = tmp_path / "clone.json"
    assert _run("teleclone", "--lambda0", "0.3", "--output", str(out)) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["rho_b"]["kind"] == "density_matrix"
    assert len(payload["transcripts"]) == 4


def test_basis_output(output_dir):
    assert _run("basis", "--kind", "ghz_class", "--n", "3") == 0
    payload = json.loads((output_dir / "basis_ghz_class_3.json").read_text(encoding="utf-8"))
    assert len(payload["elements"]) == 8


def test_basis_requires_n(tmp_path):
    assert _run("basis", "--kind", "nparty", "--output", str(tmp_path / "x.json")) == 2


def test_capacity_csv(tmp_path):
    out = tmp_path / "capacity.csv"
    assert _run("capacity", "--n", "2", "3", "--alpha-grid", "5", "--output", str(out)) == 0
    with open(out, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 10
    middle = [r for r in rows if r["N"] == "3" and float(r["alpha_sq"]) == pytest.approx(0.5)]
    assert float(middle[0]["c"]) == pytest.approx(1.5, abs=1e-10)


def test_verify_single_check():
    assert _run("verify", "--check", "cnot_ghz_preparation") == 0


def test_unknown_subcommand_exits():
    with pytest.raises(SystemExit):
        _run("teleport", "--scheme", "warp")
