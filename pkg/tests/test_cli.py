import json
import math

import pytest

from statindex.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_genus_degree(capsys):
    code, out, _ = run(capsys, "genus", "todd", "--degree", "2")
    assert code == 0
    assert out.strip() == "(c1^2 + c2)/12"


def test_genus_degree_one(capsys):
    code, out, _ = run(capsys, "genus", "todd", "--degree", "1")
    assert code == 0
    assert out.strip() == "c1/2"


def test_genus_manifold(capsys):
    code, out, _ = run(capsys, "genus", "todd", "--manifold", "cp2")
    assert (code, out.strip()) == (0, "1")
    code, out, _ = run(capsys, "genus", "ahat", "--manifold", "cp2")
    assert (code, out.strip()) == (0, "-1/8")


def test_genus_unknown_manifold_exits_2(capsys):
    code, _, err = run(capsys, "genus", "todd", "--manifold", "k3")
    assert code == 2
    assert "error" in err


def test_index_ff_cp2(capsys):
    code, out, _ = run(capsys, "index", "ff", "cp2")
    assert (code, out.strip()) == (0, "3")


def test_index_fb_torus_exact(capsys):
    code, out, _ = run(capsys, "index", "fb", "torus2", "--mode", "exact")
    assert (code, out.strip()) == (0, "0")


def test_index_hrr_bundle(capsys):
    code, out, _ = run(capsys, "index", "hrr", "cp1", "--bundle", "O(3)")
    assert (code, out.strip()) == (0, "4")


def test_index_json_payload(capsys):
    code, out, _ = run(capsys, "--format", "json", "index", "bb", "cp2")
    assert code == 0
    payload = json.loads(out)
    assert payload["index"] == "3"
    assert payload["mode"] == "exact"


def test_index_bad_bundle_exits_2(capsys):
    code, _, err = run(capsys, "index", "hrr", "cp1", "--bundle", "Q(1)")
    assert code == 2


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--all", "--l", "2")
    assert code == 0
    assert out.count("PASS") == 4
    assert "x1 * x2" in out


def test_verify_single_kind(capsys):
    code, out, _ = run(capsys, "verify", "ff", "--l", "1")
    assert code == 0
    assert "x1" in out and "PASS" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify", "--all", "--l", "1")
    assert code == 0
    reports = json.loads(out)
    assert len(reports) == 4
    assert all(item["ok"] for item in reports)


def test_stats_text_and_correspondence(tmp_path, capsys):
    payload = {"levels": [math.log(2.0)], "mu": 0.0, "beta": 1.0, "statistics": "FD"}
    path = tmp_path / "system.json"
    path.write_text(json.dumps(payload))
    code, out, _ = run(capsys, "stats", str(path), "--check-correspondence")
    assert code == 0
    assert "Xi                1.5" in out
    assert "PASS" in out


def test_stats_csv(tmp_path, capsys):
    payload = {"levels": [1.0, 2.0], "mu": 0.0, "beta": 1.0, "statistics": "BE"}
    path = tmp_path / "system.json"
    path.write_text(json.dumps(payload))
    code, out, _ = run(capsys, "--format", "csv", "stats", str(path))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "level,epsilon,x,xi,occupation"
    assert len(lines) == 3


def test_stats_be_divergence_exits_2(tmp_path, capsys):
    payload = {"levels": [1.0], "mu": 1.0, "beta": 1.0, "statistics": "BE"}
    path = tmp_path / "system.json"
    path.write_text(json.dumps(payload))
    code, _, err = run(capsys, "stats", str(path))
    assert code == 2
    assert "level 0" in err


def test_zeta_det_affine(capsys):
    code, out, _ = run(capsys, "zeta-det", "--affine", "1", "1")
    assert code == 0
    assert abs(float(out) - math.sqrt(2 * math.pi)) < 1e-10


def test_zeta_det_finite(capsys):
    code, out, _ = run(capsys, "zeta-det", "--finite", "1,2,3")
    assert code == 0
    assert float(out) == pytest.approx(6.0)


def test_spectral_report(tmp_path, capsys):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"form": "finite", "eigenvalues": [1.0, 2.0, 3.0]}))
    code, out, _ = run(capsys, "spectral", str(path))
    assert code == 0
    assert "euler class       6" in out
    assert "pairing ff" in out


def test_deterministic_output(capsys):
    _, first, _ = run(capsys, "--format", "json", "verify", "--all", "--l", "2")
    _, second, _ = run(capsys, "--format", "json", "verify", "--all", "--l", "2")
    assert first == second


def test_config_file_sets_format(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"format": "json"}))
    code, out, _ = run(capsys, "--config", str(config), "index", "ff", "cp1")
    assert code == 0
    assert json.loads(out)["index"] == "2"


def test_flag_overrides_config(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"format": "json"}))
    code, out, _ = run(capsys, "--config", str(config), "--format", "text",
                       "index", "ff", "cp1")
    assert code == 0
    assert out.strip() == "2"
