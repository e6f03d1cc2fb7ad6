import csv
import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from leakyarc import cli

SEGMENT = '[curve]\nkind = "segment"\nlength = 1.0\n'
QUARTER = f'[curve]\nkind = "circular_arc"\nradius = 1.0\nangle = {math.pi / 2!r}\n'


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# -- parsing --------------------------------------------------------------------

def test_minimal_config_gets_defaults():
    cfg = cli.parse_config(SEGMENT + "[task.spectrum]\nbeta = 50\n")
    assert cfg.task == "spectrum"
    assert cfg.params == {"betas": [50.0], "j_max": 2, "N": None, "tol": 1e-7}
    assert cfg.output_dir == "out" and cfg.workers == 1 and cfg.csv and cfg.json


def test_negative_beta():
    with pytest.raises(cli.ConfigError) as err:
        cli.parse_config(SEGMENT + "[task.spectrum]\nbeta = -5\n")
    assert any("beta must be positive" in e for e in err.value.errors)


def test_two_tasks():
    with pytest.raises(cli.ConfigError) as err:
        cli.parse_config(SEGMENT + "[task.spectrum]\nbeta = 5\n[task.sweep]\nbetas = [50, 60, 70]\n")
    assert any("exactly one task" in e for e in err.value.errors)


def test_errors_are_aggregated():
    text = ('[curve]\nkind = "circular_arc"\nradius = -1\nangle = 7.0\nwobble = 1\n'
            '[task.spectrum]\nbetas = [50, -2]\nj_max = 0\ntol = "small"\n[run]\nworkers = 0\n')
    with pytest.raises(cli.ConfigError) as err:
        cli.parse_config(text)
    msgs = " | ".join(err.value.errors)
    for needle in ("radius must be positive", "angle must stay below", "unknown key 'wobble'",
                   "beta must be positive", "j_max must be positive", "tol must be a number",
                   "workers must be positive"):
        assert needle in msgs
    assert len(err.value.errors) >= 7


def test_syntax_error_has_line_number():
    with pytest.raises(cli.ConfigError) as err:
        cli.parse_config('[curve]\nkind = "segment"\nlength = = 1\n')
    assert "line 3" in str(err.value)


def test_unknown_task_and_missing_curve():
    with pytest.raises(cli.ConfigError) as err:
        cli.parse_config("[task.plot]\n")
    msgs = " | ".join(err.value.errors)
    assert "missing [curve]" in msgs and "unknown task 'plot'" in msgs


CONFIGS = [
    SEGMENT + "[task.curve-info]\n",
    QUARTER + "[task.effective]\nj_max = 3\nM = 500\n",
    SEGMENT + "margin = 0.3\n[task.sweep]\nbetas = [50, 100, 200]\nN = 640\n[output]\ndir = \"res\"\njson = false\n",
    '[curve]\nkind = "polynomial"\nx = [0, 1]\ny = [0, 0, 0.5]\nu_range = [-1, 1]\n'
    "[task.eigenfunction]\nbeta = 60\nj = 2\nbbox = [-1, 2, -1, 1]\nresolution = 40\n[run]\nworkers = 3\n",
]


@pytest.mark.parametrize("text", CONFIGS)
def test_round_trip(text):
    cfg = cli.parse_config(text)
    assert cli.parse_config(cli.serialize(cfg)) == cfg


@settings(max_examples=40, deadline=None)
@given(betas=st.lists(st.floats(20.0, 1e3), min_size=1, max_size=5, unique=True),
       j_max=st.integers(1, 6), tol=st.floats(1e-12, 1e-3), workers=st.integers(1, 8))
def test_round_trip_property(betas, j_max, tol, workers):
    text = cli.serialize(cli.RunConfig(
        {"kind": "segment", "length": 1.0, "margin": None}, "sweep",
        {"betas": sorted(betas), "j_max": j_max, "N": None, "tol": tol}, workers=workers))
    cfg = cli.parse_config(text)
    assert cli.parse_config(cli.serialize(cfg)) == cfg
    assert cfg.params["betas"] == sorted(betas)


# -- running ------------------------------------------------------------------------

def run_text(text, out, **kw):
    return cli.run(cli.parse_config(text), out=str(out), quiet=True, **kw)


def test_curve_info(tmp_path, capsys):
    status = cli.run(cli.parse_config(QUARTER + "[task.curve-info]\n"), out=str(tmp_path))
    assert status == 0
    printed = capsys.readouterr().out
    assert "L = 1.57079632679" in printed and "K = 1\n" in printed and "a < 0.5" in printed
    info = json.load(open(tmp_path / "curve_info.json"))
    assert info["L"] == pytest.approx(math.pi / 2) and info["tubular_cap"] == pytest.approx(0.5)
    assert read_csv(tmp_path / "polyline.csv")[0].keys() == {"s", "x", "y", "kappa"}
    manifest = json.load(open(tmp_path / "manifest.json"))
    for key in ("config", "versions", "wall_time_s", "defaults"):
        assert key in manifest
    assert manifest["defaults"]["tol"] == 1e-7


def test_effective(tmp_path):
    assert run_text(QUARTER + "[task.effective]\nj_max = 2\n", tmp_path) == 0
    rows = read_csv(tmp_path / "effective.csv")
    assert [float(r["mu"]) for r in rows] == pytest.approx([3.75, 15.75], abs=1e-6)


def test_effective_margin_exceeded_is_nonzero(tmp_path):
    assert run_text(QUARTER + "[task.effective]\nbeta = 50\n", tmp_path) == 1
    assert "MarginExceeded" in json.load(open(tmp_path / "manifest.json"))["errors"][0]["error"]


def test_spectrum_missing_level(tmp_path, capsys):
    status = cli.run(cli.parse_config(SEGMENT + "[task.spectrum]\nbeta = 12\nj_max = 3\n"),
                     out=str(tmp_path))
    assert status != 0
    assert "NoSuchLevel" in capsys.readouterr().out
    rows = read_csv(tmp_path / "spectrum.csv")
    assert [int(r["j"]) for r in rows] == [1, 2]
    assert all(float(r["E"]) < 0 for r in rows)


def test_sweep_and_determinism(tmp_path):
    text = SEGMENT + "[task.sweep]\nbetas = [20, 30, 40]\nj_max = 1\n"
    assert run_text(text, tmp_path / "a") == 0
    assert run_text(text, tmp_path / "b", workers=2) == 0
    a = (tmp_path / "a" / "sweep.csv").read_bytes()
    assert a == (tmp_path / "b" / "sweep.csv").read_bytes()
    assert a == (tmp_path / "a" / "sweep.csv").read_bytes()
    assert len(a.decode().splitlines()) == 4
    summary = json.load(open(tmp_path / "a" / "summary.json"))
    assert summary["apriori"] is True and "C" in summary and "trend" in summary


def test_eigenfunction(tmp_path):
    text = SEGMENT + "[task.eigenfunction]\nbeta = 30\nbbox = [-0.5, 1.5, -0.5, 0.5]\nresolution = [12, 9]\n"
    assert run_text(text, tmp_path) == 0
    rows = read_csv(tmp_path / "eigenfunction.csv")
    assert len(rows) == 108 and rows[0].keys() == {"x", "y", "u", "flag"}
    flagged = [r for r in rows if r["flag"] == "1"]
    assert flagged and all(r["u"] == "nan" for r in flagged)
    assert json.load(open(tmp_path / "bound_state.json"))["j"] == 1


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert run_text(SEGMENT + "[task.curve-info]\n", blocker / "sub") == 2


def test_main_entry(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text(SEGMENT + "[task.curve-info]\n", encoding="utf-8")
    assert cli.main([str(cfg), "--out", str(tmp_path / "o"), "--quiet"]) == 0
    bad = tmp_path / "bad.toml"
    bad.write_text(SEGMENT + "[task.spectrum]\nbeta = -5\n", encoding="utf-8")
    assert cli.main([str(bad)]) == 2
    proc = subprocess.run([sys.executable, "-m", "leakyarc", str(cfg), "--out", str(tmp_path / "p")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "L = 1" in proc.stdout
