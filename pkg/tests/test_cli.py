import itertools
import json

import numpy as np
import pytest
from click.testing import CliRunner

from icbounds.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def gaussian_doc(**kw):
    doc = {"type": "gaussian", "s11": 1.3, "s12": 0.6, "s21": 0.9, "s22": 1.1,
           "p1": 2.0, "p2": 1.5, "d12": 0.4, "d21": 0.7}
    doc.update(kw)
    return doc


def discrete_doc(d12=0.5):
    w = np.zeros((2, 2, 2, 2))
    for x1, x2 in itertools.product(range(2), repeat=2):
        w[x1 ^ x2, x1, x1, x2] = 1.0
    return {"type": "discrete", "ny1": 2, "ny2": 2, "nx1": 2, "nx2": 2,
            "w": [float(v) for v in w.reshape(-1)], "d12": d12}


def test_outer_writes_frontier(tmp_path, runner):
    spec = write_json(tmp_path / "ch.json", gaussian_doc())
    out = tmp_path / "region.csv"
    res = runner.invoke(main, ["outer", "--channel", spec, "--grid", "11",
                               "--out", str(out)])
    assert res.exit_code == 0, res.output
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "r1,r2"
    assert len(lines) > 100


def test_outer_hull_flag(tmp_path, runner):
    spec = write_json(tmp_path / "ch.json", gaussian_doc())
    raw, hull = tmp_path / "raw.csv", tmp_path / "hull.csv"
    assert runner.invoke(main, ["outer", "--channel", spec, "--grid", "11",
                                "--out", str(raw)]).exit_code == 0
    assert runner.invoke(main, ["outer", "--channel", spec, "--grid", "11",
                                "--hull", "--out", str(hull)]).exit_code == 0
    from icbounds import from_csv, includes

    assert includes(from_csv(hull.read_text()), from_csv(raw.read_text()),
                    tol=1e-6)


def test_outer_rejects_malformed_json(tmp_path, runner):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "gaussian", ')
    out = tmp_path / "nope.csv"
    res = runner.invoke(main, ["outer", "--channel", str(bad), "--out", str(out)])
    assert res.exit_code == 2
    assert not out.exists()


def test_outer_rejects_wrong_type(tmp_path, runner):
    spec = write_json(tmp_path / "d.json", discrete_doc())
    res = runner.invoke(main, ["outer", "--channel", spec, "--out",
                               str(tmp_path / "x.csv")])
    assert res.exit_code == 2


def test_figure_presets(tmp_path, runner):
    res = runner.invoke(main, ["figure", "--preset", "fig3", "--grid", "11",
                               "--out", str(tmp_path / "figs")])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "figs" / "fig3_bound.csv").exists()
    assert (tmp_path / "figs" / "fig3_bound_hull.csv").exists()


def test_figure_comparison_slot(tmp_path, runner):
    ext = tmp_path / "external.csv"
    ext.write_text("r1,r2\n0,8\n4,8\n8,0\n")
    res = runner.invoke(main, ["figure", "--preset", "fig2", "--grid", "11",
                               "--out", str(tmp_path / "figs"),
                               "--compare", str(ext)])
    assert res.exit_code == 0, res.output
    comp = (tmp_path / "figs" / "fig2_comparison.csv").read_text().splitlines()
    assert comp[0] == "r1,r2_bound,r2_external,difference"


def test_figure_unknown_preset(tmp_path, runner):
    res = runner.invoke(main, ["figure", "--preset", "fig9",
                               "--out", str(tmp_path)])
    assert res.exit_code == 2


def test_classify_cascade(tmp_path, runner):
    spec = write_json(tmp_path / "g6.json", {
        "type": "gaussian-6", "s11": 2.0, "s12": 1.0, "s21": 2.0, "s22": 0.9,
        "p1": 1.0, "p2": 1.0, "d12": 0.3})
    res = runner.invoke(main, ["classify", "--channel", spec])
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["label"] == "corollary-1"
    assert doc["margin"] == pytest.approx(0.9)


def test_classify_boundary(tmp_path, runner):
    spec = write_json(tmp_path / "g6.json", {
        "type": "gaussian-6", "s11": 2.0, "s12": 1.0, "s21": 1.0, "s22": 0.75,
        "p1": 1.0, "p2": 1.0, "d12": 0.3})
    doc = json.loads(runner.invoke(main, ["classify", "--channel", spec]).output)
    assert doc["margin"] == 0.0 and doc["boundary"]


def test_classify_undefined_threshold(tmp_path, runner):
    spec = write_json(tmp_path / "g6.json", {
        "type": "gaussian-6", "s11": 0.0, "s12": 1.0, "s21": 1.0, "s22": 0.75,
        "p1": 1.0, "p2": 1.0, "d12": 0.3})
    assert runner.invoke(main, ["classify", "--channel", spec]).exit_code == 3


def test_inner_theorem5_shape_gate(tmp_path, runner):
    spec = write_json(tmp_path / "ch.json", gaussian_doc(s12=0.5))
    res = runner.invoke(main, ["inner", "--channel", spec, "--theorem", "5",
                               "--out", str(tmp_path / "x.csv")])
    assert res.exit_code == 2


def test_inner_theorem5_region(tmp_path, runner):
    spec = write_json(tmp_path / "ch.json",
                      gaussian_doc(s12=0.0, s11=1.0, s21=2.0, s22=1.0,
                                   p1=1.0, p2=1.0, d12=0.5, d21=0.0))
    out = tmp_path / "t5.csv"
    res = runner.invoke(main, ["inner", "--channel", spec, "--theorem", "5",
                               "--out", str(out)])
    assert res.exit_code == 0, res.output
    rows = out.read_text().strip().splitlines()[1:]
    assert float(rows[0].split(",")[1]) == pytest.approx(0.5, abs=1e-9)


def test_inner_regime_gate_exit_code(tmp_path, runner):
    spec = write_json(tmp_path / "g6.json", {
        "type": "gaussian-6", "s11": 3.0, "s12": 1.0, "s21": 1.0, "s22": 0.2,
        "p1": 1.0, "p2": 1.0, "d12": 0.3})
    res = runner.invoke(main, ["inner", "--channel", spec, "--theorem", "2",
                               "--out", str(tmp_path / "x.csv")])
    assert res.exit_code == 4
    res = runner.invoke(main, ["inner", "--channel", spec, "--theorem", "2",
                               "--force", "--out", str(tmp_path / "x.csv")])
    assert res.exit_code == 0


def test_inner_sum_capacity_json(tmp_path, runner):
    spec = write_json(tmp_path / "g6.json", {
        "type": "gaussian-6", "s11": 3.0, "s12": 1.0, "s21": 1.0, "s22": 1.0,
        "p1": 1.0, "p2": 1.0, "d12": 0.3})
    res = runner.invoke(main, ["inner", "--channel", spec, "--theorem", "3"])
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["theorem"] == 3 and doc["sum_capacity"] > 0


def test_inner_discrete_region(tmp_path, runner):
    spec = write_json(tmp_path / "d.json", discrete_doc(d12=0.5))
    out = tmp_path / "inner.csv"
    res = runner.invoke(main, ["inner", "--channel", spec, "--theorem", "2",
                               "--grid", "9", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert out.read_text().startswith("r1,r2\n")


def test_check_condition_fails_on_constant_output(tmp_path, runner):
    w = np.zeros((2, 2, 2, 2))
    for x1, x2 in itertools.product(range(2), repeat=2):
        w[x1, 0, x1, x2] = 1.0
    spec = write_json(tmp_path / "d.json", {
        "type": "discrete", "ny1": 2, "ny2": 2, "nx1": 2, "nx2": 2,
        "w": [float(v) for v in w.reshape(-1)]})
    res = runner.invoke(main, ["check", "--channel", spec, "--condition", "4"])
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["holds_on_searched_family"] is False
    assert doc["worst_gap"] <= -0.99


def test_simulate_outputs_json(tmp_path, runner):
    cfg = {"channel": discrete_doc(), "n": 8, "r1": 0.25, "r2": 0.25,
           "d12": 0.5, "scheme": "thm2", "trials": 100, "seed": 11}
    spec = write_json(tmp_path / "cfg.json", cfg)
    res = runner.invoke(main, ["simulate", "--config", spec])
    assert res.exit_code == 0, res.output
    doc = json.loads(res.output)
    assert doc["trials"] == 100 and doc["seed"] == 11
    assert doc["err1"] <= 0.2


def test_simulate_noiseless_orthogonal(tmp_path, runner):
    w = np.zeros((2, 2, 2, 2))
    for x1, x2 in itertools.product(range(2), repeat=2):
        w[x1, x2, x1, x2] = 1.0
    cfg = {"channel": {"type": "discrete", "ny1": 2, "ny2": 2, "nx1": 2,
                       "nx2": 2, "w": [float(v) for v in w.reshape(-1)]},
           "n": 8, "r1": 0.5, "r2": 0.5, "d12": 0.0, "scheme": "thm2",
           "trials": 200, "seed": 5}
    spec = write_json(tmp_path / "cfg.json", cfg)
    doc = json.loads(runner.invoke(main, ["simulate", "--config", spec]).output)
    assert doc["err1"] == 0.0 and doc["err2"] == 0.0


def test_identical_invocations_identical_output(tmp_path, runner):
    spec = write_json(tmp_path / "ch.json", gaussian_doc())
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        res = runner.invoke(main, ["outer", "--channel", spec, "--grid", "11",
                                   "--out", str(out)])
        assert res.exit_code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
