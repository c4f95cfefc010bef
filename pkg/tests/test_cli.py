import json
import math
import subprocess
import sys
from fractions import Fraction as F

import numpy as np
import pytest

from subdivjsr.cli import run
from subdivjsr.regularity import analyze

from conftest import SCHEMES, fourpoint_family


def S(name):
    return str(SCHEMES / name)


def test_support_command(capsys):
    assert run(["support", S("shrunken.json")]) == 0
    assert capsys.readouterr().out.strip() == "[-3/2, 3/2]"
    assert run(["support", S("fourpoint_stationary.json")]) == 0
    assert capsys.readouterr().out.strip() == "[-3, 3]"


def test_analyze_interval(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code = run(["analyze", S("fourpoint.json"), "--interval", "3/64", "1/16", "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["alpha_lower"] == pytest.approx(-math.log2(3 / 8), abs=1e-3)
    assert rep["convergent"] is True
    assert "Hölder" in capsys.readouterr().out


def test_analyze_uncertified_exits_three(capsys):
    assert run(["analyze", S("haar.json")]) == 3
    assert '"convergent": false' in capsys.readouterr().out


def test_matrices_and_jsr_round_trip(tmp_path, capsys):
    mfile = tmp_path / "m.json"
    assert run(["matrices", S("fourpoint.json"), "--ell", "1", "--interval", "3/64", "1/16", "--out", str(mfile)]) == 0
    doc = json.loads(mfile.read_text())
    assert doc["dim_V"] == 4 and len(doc["exact"]) == 4
    jfile = tmp_path / "j.json"
    assert run(["jsr", str(mfile), "--out", str(jfile)]) == 0
    got = json.loads(jfile.read_text())
    rep = analyze(fourpoint_family().restricted([(F(3, 64),), (F(1, 16),)]))
    assert (got["gamma_lo"], got["gamma_hi"]) == (rep.jsr.lower, rep.jsr.upper)


def test_matrices_exact_entries(capsys):
    assert run(["matrices", S("fourpoint.json"), "--ell", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["exact"]["vertex_1/eps_0"][0] == ["-1/16", "0", "0", "0"]


def test_matrices_too_many_sum_rules_fails():
    assert run(["matrices", S("fourpoint.json"), "--ell", "3"]) == 3


def test_render_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["render", S("shrunken.json"), "--levels", "5", "--out", str(a)]) == 0
    assert run(["render", S("shrunken.json"), "--levels", "5", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = a.read_text().splitlines()
    assert rows[0] == "level,position,value"
    last = [r.split(",") for r in rows[1:] if r.startswith("5,")]
    mass = sum(float(v) for _, _, v in last) / 2**5
    assert mass == pytest.approx(1.0, abs=1e-12)


def test_gamma_command(capsys):
    assert run(["gamma", S("haar.json"), "--levels", "1", "3"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0] == "r,re,im,period"
    r1 = rows[1].split(",")
    assert float(r1[1]) == pytest.approx(1.0) and float(r1[3]) == 2.0
    assert len(rows) == 4


def test_generability_command(tmp_path, capsys):
    zs = tmp_path / "z.csv"
    zs.write_text("re,im\n2.404825557695773,0\n5.520078110286311,0\n8.653727912911013,0\n")
    assert run(["generability", str(zs), "--window", "20"]) == 0
    out = capsys.readouterr().out
    assert "verdict: violation" in out
    assert json.loads(out[out.index("{"):])["verdict"] == "violation"


def test_bad_json_reports_position(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"dim": 1,\n  "base": oops}')
    assert run(["support", str(p)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_argument_errors(capsys):
    assert run(["frobnicate"]) == 2
    assert "usage" in capsys.readouterr().err
    assert run(["analyze", S("fourpoint.json"), "--interval", "1/2", "1"]) == 2
    assert run(["analyze", S("fourpoint.json"), "--interval", "x", "1"]) == 2
    assert run(["support", "/nonexistent.json"]) == 2
    assert run(["support", S("butterfly.json")]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "subdivjsr", "support", S("shrunken.json")],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "[-3/2, 3/2]"
