"""CLI surface: commands, exit codes, JSON determinism."""

import json

import pytest

from ratorb.cli import main

A_STR = "144*z*(z+3)/(z-9)^2"
ATILDE_STR = "48*z/(4*z+3)^2"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, "--json", *argv)
    return code, json.loads(out)


def test_analyze(capsys):
    code, data = run_json(capsys, "analyze", A_STR)
    assert code == 0
    assert data["degree"] == 2
    points = {d["point"] for d in data["critical_data"]}
    assert "-9/7" in points and "9" in points
    assert data["chi_O2"] == "1"


def test_lattes_command(capsys):
    code, data = run_json(capsys, "lattes", ATILDE_STR)
    assert code == 0
    assert data["class"]["kind"] == "generalized_lattes"
    marks = {m["point"]: m["nu"] for m in data["maximal"]["marks"]}
    assert marks == {"0": 2, "inf": 2}


def test_curve_genus_command(capsys):
    code, data = run_json(capsys, "curve-genus", ATILDE_STR, "z^2/(z^2+3)", "--dmax", "2")
    assert code == 0
    assert data["rows"][0]["n"] == 1
    assert data["rows"][0]["min_genus"] == 0


def test_left_factor_command(capsys):
    code, data = run_json(capsys, "left-factor", "z^2", "z^6")
    assert code == 0
    assert data["found"] and data["V"] == "z^3"


def test_semiconj_command(capsys):
    code, data = run_json(capsys, "semiconj", ATILDE_STR, "z^2",
                          "4*sqrt(3)*z/(4*z^2+3)")
    assert code == 0 and data["holds"] is True


def test_bounded_genus_command(capsys):
    code, data = run_json(capsys, "bounded-genus", ATILDE_STR, "z^2/(z^2+3)",
                          "--lmax", "1")
    assert code == 0
    assert data["status"] == "bounded"
    assert data["theta"] == "z^2"


def test_orbit_scan_command(capsys):
    code, data = run_json(capsys, "orbit-scan", A_STR, "z^2", "1", "--n", "15")
    assert code == 0
    assert data["members"] == [0, 1, 2, 3, 5, 7, 9, 11, 13, 15]
    assert data["fit"]["classes"] == [1] and data["fit"]["singletons"] == [0, 2]


def test_exit_code_input_error(capsys):
    code, data = run_json(capsys, "analyze", "w+1")
    assert code == 2
    assert data["kind"] == "input"


def test_exit_code_budget_error(capsys):
    code, data = run_json(capsys, "curve-genus", "z^2", "z^2", "--dmax", "12")
    assert code == 3
    assert data["kind"] == "resource"


def test_orbit_scan_partial_report_is_exit_3(capsys):
    code, data = run_json(capsys, "orbit-scan", A_STR, "z^2", "1", "--n", "25",
                          "--height-cap", "3000")
    assert code == 3
    assert data["status"] == "height-capped"
    assert data["horizon"] < 25
    assert data["members"]  # partial report still emitted


def test_json_determinism(capsys):
    _, out1 = run(capsys, "--json", "lattes", ATILDE_STR)
    _, out2 = run(capsys, "--json", "lattes", ATILDE_STR)
    assert out1 == out2
    _, out3 = run(capsys, "--json", "analyze", A_STR)
    _, out4 = run(capsys, "--json", "analyze", A_STR)
    assert out3 == out4


def test_human_output(capsys):
    code, out = run(capsys, "orbit-scan", A_STR, "z^2", "1", "--n", "15")
    assert code == 0
    assert "members" in out and "1 mod 2" in out
