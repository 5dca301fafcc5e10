import csv
import io
import json
import math

import numpy as np
import pytest

from splitoct import cli
from splitoct.algebra import Octonion
from splitoct.kinematics import Constants, Signal
from splitoct.specs import (
    Automorphism,
    Boost,
    Identity,
    Infinitesimal,
    NoClassicalCounterpart,
    Passive,
    Rotor,
    parse_transform,
    rotation_about,
)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- spec parsing ---------------------------------------------------------


@pytest.mark.parametrize("obj, kind", [
    ({"identity": {}}, Identity),
    ({"rotor": {"axis": "j1", "param": 0.3}}, Rotor),
    ({"boost": {"n": 2, "v": 0.6}}, Boost),
    ({"passive": {"axis": "I", "phases": [0.1, 0.2, 0.3, 0.4]}}, Passive),
    ({"family": "fix-J2", "params": [0.1, 0.2], "mode": "passive"}, Automorphism),
    ({"infinitesimal": {"alpha": [1, 0, 0], "eps": 1e-3}}, Infinitesimal),
])
def test_parse_transform(obj, kind):
    assert isinstance(parse_transform(obj), kind)


@pytest.mark.parametrize("obj", [
    [], {"spin": {}}, {"boost": {"n": 4, "v": 0.1}}, {"rotor": {"axis": "1", "param": 0}},
    {"passive": {"axis": "j1", "phases": [1, 2]}}, {"family": "fix-j1", "mode": "sideways"},
    {"boost": {"n": 1, "v": "fast"}},
])
def test_parse_transform_rejects(obj):
    with pytest.raises(ValueError):
        parse_transform(obj)


def test_rotation_about():
    r = rotation_about(1, math.pi / 2)
    assert np.allclose(r @ [0, 1, 0], [0, 0, 1])
    assert np.allclose(r @ [1, 0, 0], [1, 0, 0])


def test_passive_has_no_classical_counterpart():
    with pytest.raises(NoClassicalCounterpart):
        Passive(4, (0, 0, 0, 0)).classical(0.0, np.zeros(3), Constants())


def test_infinitesimal_classical_matches_first_order():
    t = Infinitesimal(parse_transform({"infinitesimal": {"alpha": [0, 0, 1]}}).params, 1e-3)
    _, x = t.classical(0.0, np.array([1.0, 0, 0]), Constants())
    assert np.allclose(x, [1, -0.5e-3, 0])


# --- table / graph ----------------------------------------------------------


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 9 and {len(r) for r in rows} == {9}
    assert rows[2][3] == "+j3"


def test_table_is_deterministic(capsys):
    assert run(capsys, "table")[1] == run(capsys, "table")[1]


def test_table_bad_format(capsys):
    code, _, err = run(capsys, "table", "--format", "xml")
    assert code == 2 and "usage" in err


def test_graph_file(tmp_path, capsys):
    a, b = tmp_path / "a.dot", tmp_path / "b.dot"
    assert run(capsys, "graph", "--out", str(a))[0] == 0
    assert run(capsys, "graph", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    for name in ("J1", "J2", "J3", "j1", "j2", "j3", "I"):
        assert f'"{name}";' in text


def test_graph_stdout(capsys):
    code, out, _ = run(capsys, "graph")
    assert code == 0 and out.startswith("digraph")


def test_graph_unwritable(tmp_path, capsys):
    code, _, err = run(capsys, "graph", "--out", str(tmp_path / "missing" / "g.dot"))
    assert code == 1 and "cannot write" in err


# --- verify -----------------------------------------------------------------


def test_verify_algebra(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "algebra", "--trials", "2000", "--seed", "7")
    assert code == 0
    assert out.startswith("suite=algebra seed=7 trials=2000")


def test_verify_json_deterministic(capsys):
    args = ("verify", "--suite", "kinematics", "--trials", "300", "--seed", "3", "--json")
    first = run(capsys, *args)[1]
    assert first == run(capsys, *args)[1]
    rep = json.loads(first)
    assert rep["seed"] == 3 and rep["passed"] and "wall_time_s" not in rep


def test_verify_zero_tolerance_fails(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "algebra", "--trials", "100", "--tolerance", "0")
    assert code == 1 and "FAIL" in out


def test_verify_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "11")
    out = run(capsys, "verify", "--suite", "kinematics", "--trials", "10")[1]
    assert "seed=11" in out
    monkeypatch.delenv(cli.SEED_ENV)
    assert "seed=0" in run(capsys, "verify", "--suite", "kinematics", "--trials", "10")[1]


def test_verify_timing_goes_to_stderr(capsys):
    code, out, err = run(capsys, "verify", "--suite", "kinematics", "--trials", "10", "--timing")
    assert code == 0 and "wall time" in err and "wall" not in out


@pytest.mark.parametrize("argv", [
    ("verify", "--suite", "nope"), ("verify", "--trials", "0"), ("verify", "--trials", "x"),
    ("frobnicate",), (),
])
def test_verify_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


# --- transform ----------------------------------------------------------------


def test_transform_identity(capsys):
    sig = {"t": 1.0, "x": [1.0, 2.0, 3.0], "lambda": [0.1, 0.2, 0.3], "omega": 0.5}
    code, out, _ = run(capsys, "transform", "--spec", '{"identity": {}}', "--signal", json.dumps(sig))
    assert code == 0
    res = json.loads(out)
    assert res["signal"] == sig
    assert res["norm_in"] == res["norm_out"]


def test_transform_boost(capsys):
    code, out, _ = run(capsys, "transform", "--spec", '{"boost": {"n": 1, "v": 0.6}}',
                       "--signal", '{"t": 1}')
    assert code == 0
    res = json.loads(out)
    assert np.allclose(res["octonion"]["coeff"], [1.25, 0.75, 0, 0, 0, 0, 0, 0], atol=1e-12)
    assert math.isclose(res["signal"]["t"], 1.25, abs_tol=1e-12)
    assert math.isclose(res["norm_in"], res["norm_out"], abs_tol=1e-12)


def test_transform_coefficients_and_automorphism(capsys):
    coeff = {"coeff": [1, 2, 3, 4, 5, 6, 7, 8]}
    code, out, _ = run(capsys, "transform", "--spec", '{"family": "fix-I", "params": [0.3, -0.2]}',
                       "--signal", json.dumps(coeff))
    res = json.loads(out)
    assert code == 0
    assert math.isclose(res["norm_in"], res["norm_out"], rel_tol=1e-12)


def test_transform_infinitesimal(capsys):
    spec = {"infinitesimal": {"beta": [1, 0, 0], "eps": 1e-3}}
    code, out, _ = run(capsys, "transform", "--spec", json.dumps(spec),
                       "--signal", '{"x": [0.2, 0, 0], "omega": 0.8}', "--hbar", "0.5", "--c", "2")
    assert code == 0
    assert math.isclose(json.loads(out)["signal"]["x"][0], 0.2 + 1e-3 * 2 * 0.5 * 0.8)


def test_transform_invalid_velocity(capsys):
    code, _, err = run(capsys, "transform", "--spec", '{"boost": {"n": 1, "v": 1.5}}',
                       "--signal", '{"t": 1}')
    assert code == 1 and "below c" in err


@pytest.mark.parametrize("spec, signal", [
    ('{"boost": ', '{"t": 1}'),
    ('{"identity": {}}', '{"t": '),
    ('{"identity": {}}', '{"coeff": [1, 2]}'),
    ('{"identity": {}}', '{"t": 1, "q": 2}'),
])
def test_transform_malformed(capsys, spec, signal):
    assert run(capsys, "transform", "--spec", spec, "--signal", signal)[0] == 2


# --- decompose ----------------------------------------------------------------


def test_decompose_circular(capsys):
    code, out, _ = run(capsys, "decompose", "--axis", "j1", "--signal", '{"coeff": [3,0,0,0,4,0,0,0]}')
    res = json.loads(out)
    assert code == 0
    assert res["planes"][0]["norm"] == 5.0
    assert res["norm_sign"] == "positive"


def test_decompose_zero(capsys):
    code, out, _ = run(capsys, "decompose", "--axis", "j2", "--signal", '{"t": 0}')
    res = json.loads(out)
    assert code == 0 and res["norm_sign"] == "null"
    assert all(p["norm"] == 0 and p["angle"] == 0 for p in res["planes"])


def test_decompose_hyperbolic_failure(capsys):
    code, out, err = run(capsys, "decompose", "--axis", "I", "--signal", '{"coeff": [1,0,0,0,0,0,0,1]}')
    assert code == 1
    assert ["1", "I"] in [p["plane"] for p in json.loads(out)["offending_planes"]]


def test_decompose_bad_axis(capsys):
    assert run(capsys, "decompose", "--axis", "k1", "--signal", "{}")[0] == 2


# --- limit ----------------------------------------------------------------------


def test_limit_classical_signal(capsys):
    code, out, _ = run(capsys, "limit", "--signal", '{"t": 1, "x": [0.5, 0, 0]}',
                       "--spec", '{"boost": {"n": 1, "v": 0.6}}', "--hbar-list", "1", "0.1", "0.01")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["hbar", "deviation"]
    assert [float(r[1]) for r in rows[1:]] == [0.0, 0.0, 0.0]


def test_limit_generic_signal_decreases(capsys):
    sig = '{"t": 1, "x": [0.5, 0, 0], "lambda": [0.3, 0.2, 0.1], "omega": 0.4}'
    code, out, _ = run(capsys, "limit", "--signal", sig, "--spec", '{"boost": {"n": 1, "v": 0.6}}',
                       "--hbar-list", "1,0.1,0.01,0.001")
    devs = [float(r[1]) for r in list(csv.reader(io.StringIO(out)))[1:]]
    assert code == 0 and len(devs) == 4
    assert all(a > b for a, b in zip(devs, devs[1:]))


@pytest.mark.parametrize("argv", [
    ("--signal", '{"t": ', "--spec", '{"identity": {}}', "--hbar-list", "1"),
    ("--signal", '{"t": 1}', "--spec", '{"identity": {}}', "--hbar-list", "abc"),
    ("--signal", '{"t": 1}', "--spec", '{"passive": {"axis": "j1", "phases": [0,0,0,0]}}',
     "--hbar-list", "1"),
])
def test_limit_malformed(capsys, argv):
    assert run(capsys, "limit", *argv)[0] == 2
