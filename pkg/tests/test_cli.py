import json
import os
import subprocess
import sys

import pytest

from tmesh_splines.cli import main, load_mesh_file
from tmesh_splines.fixtures import fixture_doc, load_fixture
from tmesh_splines.render import render_svg

HERE = os.path.dirname(__file__)
FIXDIR = os.path.join(HERE, "..", "src", "tmesh_splines", "fixtures")


def fixture_path(name):
    return os.path.join(FIXDIR, f"{name}.json")


def run_cli(*argv):
    return main(list(argv))


def test_stats_fig2(capsys):
    assert run_cli("stats", fixture_path("fig2")) == 0
    out = capsys.readouterr().out
    assert "V_plus: 6" in out and "E: 6" in out and "F: 13" in out


def test_stats_json(capsys):
    assert run_cli("--json", "stats", fixture_path("fig6")) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ok"] and doc["values"]["V_plus"] == 5
    assert doc["values"]["delta"] == 2


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert run_cli("stats", str(bad)) == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_unknown_suite_exit_code(tmp_path):
    assert run_cli("verify", fixture_path("fig6"), "--suite", "nope") == 2


def test_dim_all_methods(capsys):
    assert run_cli("dim", fixture_path("fig2"), "--space", "1,1,0,0", "--hbc") == 0
    out = capsys.readouterr().out
    assert "formula: 6" in out and "oracle: 6" in out and "embedding: 6" in out
    assert "PASS methods-agree" in out


def test_dim_biquadratic_hier(capsys):
    assert run_cli("dim", fixture_path("fig6"), "--space", "2,2,1,1", "--hbc") == 0
    out = capsys.readouterr().out
    assert "formula: 1" in out and "oracle: 1" in out


def test_verify_suite_exit_codes(capsys):
    assert run_cli("verify", fixture_path("fig6"), "--suite", "bilinear") == 0
    assert run_cli("verify", "--random", "seed=3,levels=1,cvc",
                   "--suite", "euler") == 0


def test_oracle_nullspace_output(tmp_path, capsys):
    out = tmp_path / "null.json"
    assert run_cli("oracle", fixture_path("fig2"), "--space", "2,2,1,1",
                   "--hbc", "--nullspace", str(out)) == 0
    doc = json.loads(out.read_text())
    assert len(doc["functions"]) == 1
    text = capsys.readouterr().out
    assert "dimension: 1" in text


def test_gen_and_roundtrip(tmp_path, capsys):
    out = tmp_path / "mesh.json"
    assert run_cli("gen", "--seed", "5", "--rows", "3", "--cols", "3",
                   "--levels", "2", "--prob", "0.4", "--cvc", "-o", str(out)) == 0
    obj = load_mesh_file(str(out))
    assert obj.realized.stats.F > 9
    assert run_cli("stats", str(out)) == 0


def test_extend_cli(tmp_path):
    out = tmp_path / "ext.json"
    assert run_cli("extend", fixture_path("fig2"), "-m", "2", "-n", "2",
                   "--margin", "1/4", "-o", str(out)) == 0
    ext = load_mesh_file(str(out))
    assert ext.domain[0] == -0.5 + 1  # 1 - 2*(1/4)


def test_basis_cli(capsys):
    assert run_cli("basis", fixture_path("fig2"), "--kind", "cardinal",
                   "--check", "independence", "--check", "nonneg",
                   "--eval", "2,2") == 0
    out = capsys.readouterr().out
    assert "count: 6" in out
    assert "PASS linear-independence" in out and "PASS nonnegative" in out


def test_cvr_cli(capsys, tmp_path):
    svg = tmp_path / "cvr.svg"
    assert run_cli("cvr", fixture_path("fig11_t1"), "--svg", str(svg),
                   "--conjecture", "2,2") == 0
    out = capsys.readouterr().out
    assert "components: 2" in out
    assert svg.exists()


def test_render_golden(tmp_path):
    svg = render_svg(load_fixture("fig11_t1"), show_cvr=True)
    with open(os.path.join(HERE, "golden", "fig11_t1_cvr.svg")) as f:
        assert svg == f.read()
    svg5 = render_svg(load_fixture("fig5"), show_levels=True)
    with open(os.path.join(HERE, "golden", "fig5_levels.svg")) as f:
        assert svg5 == f.read()
    # determinism across repeated calls
    assert svg == render_svg(load_fixture("fig11_t1"), show_cvr=True)


def test_console_script_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "tmesh_splines.cli", "stats", fixture_path("fig9")],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "V_plus: 27" in proc.stdout
