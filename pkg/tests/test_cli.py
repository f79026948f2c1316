import copy
import json
import subprocess
import sys

import numpy as np
import pytest

from maslov_wave import cli
from maslov_wave import config as cf
from maslov_wave import pipeline as pl
from maslov_wave import wave as wv

REMARK = {
    "system": {
        "kind": "matrices", "n": 2, "r": 1,
        "B_minus": [[1.0, np.sqrt(35) / 4], [np.sqrt(35) / 4, 2.0]],
        "B_plus": [[1.0, np.sqrt(35) / 4], [np.sqrt(35) / 4, 2.0]],
    },
    "check": {"require": ["H1", "H2prime"]},
}


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def _integers(report):
    return {k: report[k] for k in ("indices", "counts", "identities")}


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    """solve-wave once, then analyze from the solver and from the saved profile."""
    base = tmp_path_factory.mktemp("cli")
    out = {}
    out["solve_rc"] = cli.main(["solve-wave", "--system", "fhn", "--out", str(base / "wave")])
    out["solver_rc"] = cli.main(["analyze", "--system", "fhn", "--a", "0.25", "--gamma", "10",
                                 "--d", "1.0", "--out", str(base / "a1")])
    out["profile_rc"] = cli.main(["analyze", "--profile", str(base / "wave" / "wave.csv"),
                                  "--meta", str(base / "wave" / "wave.json"), "--out", str(base / "a2")])
    out["base"] = base
    return out


# -- check --------------------------------------------------------------------

def test_check_fhn(capsys):
    assert cli.main(["check", "--system", "fhn"]) == 0
    text = capsys.readouterr().out
    assert "H1[plus]" in text and "H2prime[minus]" in text and "d_gt_gamma_inv2" in text


def test_check_remark_matrix(tmp_path, capsys):
    assert cli.main(["check", "--config", _write(tmp_path, "c.json", REMARK)]) == 1
    text = capsys.readouterr().out
    assert "H1[minus]              true" in text and "H2prime[minus]         false" in text


@pytest.mark.parametrize("payload", [
    {"sytem": {"kind": "fhn"}},
    {"system": {"kind": "fhn", "a": 0.7}},
    {"sweep": {"lambda_grid": 2}},
    {"system": {"kind": "matrices", "n": 2, "r": 1, "B_minus": [[1.0]], "B_plus": [[1.0]]}},
    "{not json",
])
def test_check_bad_config(tmp_path, payload, capsys):
    assert cli.main(["check", "--config", _write(tmp_path, "c.json", payload)]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert cli.main(["check", "--config", str(tmp_path / "none.json")]) == 2


def test_bad_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["check", "--bogus"])
    assert exc.value.code == 2


def test_flag_not_applicable(tmp_path):
    assert cli.main(["check", "--config", _write(tmp_path, "c.json", REMARK), "--gamma", "3"]) == 2


def test_overrides_reach_config(tmp_path):
    args = cli.build_parser().parse_args(
        ["analyze", "--xi-max", "30", "--nodes", "1500", "--lambda-grid", "80", "--delta0", "1e-5",
         "--seed", "4", "--out", str(tmp_path)])
    cfg = cli.resolve_config(args)
    assert cfg["bvp"]["Xi"] == 30.0 and cfg["bvp"]["nodes"] == 1500
    assert cfg["sweep"]["lambda_grid"] == 80 and cfg["sweep"]["delta0"] == 1e-5
    assert cfg["seed"] == 4 and cfg["output"]["dir"] == str(tmp_path)


def test_config_roundtrip_bit_exact(tmp_path):
    cfg = cf.merged({"system": {"kind": "fhn", "a": 0.1 + 0.2, "gamma": 1 / 3, "d": 2 ** 0.5}})
    path = cf.save_config(cfg, tmp_path / "c.json")
    back = cf.merged(cf.load_config(path))
    assert back == cfg and cf.config_hash(back) == cf.config_hash(cfg)


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "maslov_wave.cli", "check", "--system", "fhn"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "required" in r.stdout


# -- solve-wave and analyze ---------------------------------------------------

def test_solve_wave_writes_profile(runs):
    assert runs["solve_rc"] == 0
    prof = wv.load_profile(runs["base"] / "wave" / "wave.csv", runs["base"] / "wave" / "wave.json")
    assert prof.c > 0


def test_analyze_fhn_end_to_end(runs):
    assert runs["solver_rc"] == 0
    out = runs["base"] / "a1"
    rep = json.loads((out / "report.json").read_text())
    assert rep["counts"]["N_plus"] == rep["indices"]["maslov_def15"] == 0
    for name in ("crossings_def15", "crossings_def14", "evans", "spectral_flow", "boundary",
                 "principal_angles"):
        assert (out / f"{name}.csv").exists()
    assert (out / "crossings_def15.csv").read_text().splitlines()[0] == "lambda,tau,kernel_dim,m_plus,m_minus,sign"
    assert (out / "wave.csv").exists()


def test_analyze_profile_route_identical(runs):
    assert runs["profile_rc"] == 0
    a = json.loads((runs["base"] / "a1" / "report.json").read_text())
    b = json.loads((runs["base"] / "a2" / "report.json").read_text())
    assert _integers(a) == _integers(b)
    assert b["provenance"]["source"] == "profile"


def test_analyze_deterministic_across_threads(runs, tmp_path, monkeypatch):
    monkeypatch.setenv("MASLOV_WAVE_THREADS", "2")
    rc = cli.main(["analyze", "--system", "fhn", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "report.json").read_bytes() == (runs["base"] / "a1" / "report.json").read_bytes()


def test_analyze_lambda_grid_refinement(runs, tmp_path):
    assert cli.main(["analyze", "--system", "fhn", "--lambda-grid", "200", "--out", str(tmp_path)]) == 0
    a = json.loads((runs["base"] / "a1" / "report.json").read_text())
    b = json.loads((tmp_path / "report.json").read_text())
    assert _integers(a) == _integers(b)


def test_analyze_pipeline_error_exit_3(tmp_path, capsys):
    rc = cli.main(["analyze", "--profile", str(tmp_path / "missing.csv"), "--out", str(tmp_path)])
    assert rc == 3
    assert "stage: wave" in capsys.readouterr().err


def test_analyze_identity_failure_exit_4(fhn_analysis, tmp_path, monkeypatch, capsys):
    bad = copy.deepcopy(fhn_analysis)
    bad.report.identities["prop_29"] = False
    monkeypatch.setattr(pl, "run_analysis", lambda cfg: bad)
    assert cli.main(["analyze", "--out", str(tmp_path)]) == 4
    assert "prop_29" in capsys.readouterr().err
