import json
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from shearcst import cli
from shearcst.config import RunConfig, build_config, dump_config, load_config
from shearcst.cst import closed_form_slice
from shearcst.emit import Table, read_table, table_values, write_table
from shearcst.errors import ConfigInvalid
from shearcst.grids import UniformGrid

SMALL = {"grid_n": 64}


def cfg_with(**kw):
    return build_config({**SMALL, **kw})


# --- configuration -------------------------------------------------------------------

def test_defaults_valid():
    cfg = RunConfig()
    assert cfg.grids.n == 128 and cfg.E == 1.5 and cfg.scenario == "G"
    y, x3 = cfg.grids.y_grid(cfg.params), cfg.grids.x3_grid(cfg.params)
    assert y.count == x3.count
    assert y.step == pytest.approx(x3.step, rel=1e-15) and y.origin == pytest.approx(x3.origin, rel=1e-15)


def test_config_file_and_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\ngrid_n = 32\ne_squeeze = 0.8\nt = 0, 0.5\nscenario = heisenberg\n")
    cfg = load_config(str(path), environ={})
    assert (cfg.grids.n, cfg.E, cfg.t, cfg.scenario) == (32, 0.8, (0.0, 0.5), "heisenberg")
    cfg = load_config(str(path), environ={"SHEARCST_GRID_N": "48"})
    assert cfg.grids.n == 48
    cfg = load_config(str(path), {"grid_n": 16}, environ={"SHEARCST_GRID_N": "48"})
    assert cfg.grids.n == 16


def test_dump_config_round_trip(tmp_path):
    cfg = cfg_with(e_squeeze=0.75, t=(0.0, 0.25), format="json", seed=7)
    path = tmp_path / "dump.cfg"
    path.write_text(dump_config(cfg))
    assert load_config(str(path), environ={}) == cfg


@pytest.mark.parametrize("values", [
    {"grid_n": ""},
    {"grid_n": "4"},
    {"grid_n": "abc"},
    {"scenario": "nope"},
    {"format": "xml"},
    {"radius": "1.5"},
    {"t": ""},
    {"unknown_key": "1"},
    {"q": "-1"},
])
def test_invalid_configs(values):
    with pytest.raises(ConfigInvalid):
        build_config(values)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigInvalid):
        load_config(str(tmp_path / "absent.cfg"), environ={})


# --- emission ---------------------------------------------------------------------------

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(2, 6), st.integers(2, 6), st.data(), st.sampled_from(["csv", "json"]))
def test_table_round_trip_bit_exact(tmp_path, n1, n3, data, fmt):
    g1 = UniformGrid(data.draw(finite), data.draw(st.floats(1e-6, 10)), n1)
    g3 = UniformGrid(data.draw(finite), data.draw(st.floats(1e-6, 10)), n3)
    rows = data.draw(st.lists(st.lists(finite, min_size=4, max_size=4),
                              min_size=n1 * n3, max_size=n1 * n3))
    t = Table(["x1", "x3", "re", "im"], rows, {"x1": g1, "x3": g3}, {"x2": "0.25", "note": "a b"})
    back = read_table(write_table(t, tmp_path / f"t.{fmt}", fmt))
    assert back.columns == t.columns and back.grids == t.grids and back.meta == t.meta
    assert back.data.tobytes() == t.data.tobytes()


def test_write_table_reports_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        write_table(Table(["a"], [[1.0]]), blocker / "sub" / "t.csv")


# --- verify ---------------------------------------------------------------------------------

def test_verify_default_exit_zero(capsys):
    assert cli.main(["verify"], environ={}) == 0
    err = capsys.readouterr().err
    assert "FAIL" not in err and err.count("PASS") >= 30


def test_verify_negative_control_exits_one(capsys):
    status = cli.main(["verify", "--suite", "dynamics", "--e-squeeze", "3"],
                      environ={"SHEARCST_SEED_ALPHA": "20"})
    assert status == 1
    assert "SqueezeOutOfRange" in capsys.readouterr().err


def test_verify_report_file(tmp_path):
    out = tmp_path / "report.json"
    assert cli.main(["verify", "--suite", "geometry", "--out", str(out), "--format", "json"],
                    environ={}) == 0
    doc = json.loads(out.read_text())
    assert len(doc["checks"]) == 3 and all(c["pass"] for c in doc["checks"])


@pytest.mark.parametrize("argv,env", [
    (["verify"], {"SHEARCST_GRID_N": ""}),
    (["spectrum", "--j-max", "17"], {}),
    (["cst", "--grid-n", "4"], {}),
])
def test_exit_two(argv, env, capsys):
    assert cli.main(argv, environ=env) == 2
    assert capsys.readouterr().err.startswith("shearcst:")


def test_unwritable_output_exits_two(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert cli.main(["cst", "--grid-n", "64", "--out", str(blocker / "d")], environ={}) == 2
    assert str(blocker) in capsys.readouterr().err


# --- evolve -----------------------------------------------------------------------------------

def test_evolve_heisenberg_at_zero_is_cst_slice(p):
    cfg = cfg_with(scenario="heisenberg", seed_alpha=0.0, e_squeeze=p.m_omega)
    S = cli.evolve_slices(cfg, [0.0])[0]
    g = cfg.grids.y_grid(p)
    ref = closed_form_slice(p.m_omega, p.m_omega, g, g, 0.0, p).values
    assert np.linalg.norm(S.values - ref) / np.linalg.norm(ref) < 1e-12


def test_evolve_G_reduces_to_heisenberg(p):
    times = (0.0, 0.3, 1.1)
    G = cli.evolve_slices(cfg_with(e_squeeze=p.m_omega), times)
    H = cli.evolve_slices(cfg_with(e_squeeze=p.m_omega, scenario="heisenberg"), times)
    for a, b in zip(G, H):
        assert np.max(np.abs(a.values - b.values)) < 1e-10 * np.max(np.abs(b.values))


def test_evolve_period_frames_agree(tmp_path, p):
    period = 2 * math.pi / p.omega
    times = tuple(float(t) for t in np.linspace(0, period, 5))
    assert cli.main(["evolve", "--grid-n", "64", "--out", str(tmp_path),
                     "--t", ",".join(repr(t) for t in times)], environ={}) == 0
    files = sorted(tmp_path.glob("evolve_t*.csv"))
    assert len(files) == 5
    first, last = (table_values(read_table(f)) for f in (files[0], files[-1]))
    # one period multiplies by exp(-i w T / 2) = -1
    assert np.max(np.abs(first + last)) < 1e-6 * np.max(np.abs(first))
    meta = read_table(files[2]).meta
    assert float(meta["t"]) == times[2] and meta["scenario"] == "G"


# --- geometry and spectrum ----------------------------------------------------------------------

def test_geometry_arcs_only_inside_bounds(p):
    e_list = (0.4, 0.5, 0.6, 1.0, 1.9, 2.0, 2.5)
    tables = cli.cmd_geometry(cfg_with(e_list=e_list))
    present = set(tables["arcs"].column("E"))
    assert present == {0.6, 1.0, 1.9}
    assert float(tables["arcs"].meta["E_min"]) == 0.5 and float(tables["arcs"].meta["E_max"]) == 2.0
    u = tables["arcs"].column("re_u") + 1j * tables["arcs"].column("im_u")
    assert np.all(np.abs(u) < 1 / 3 + 1e-12)


def test_geometry_circle_rows(p):
    c = cli.cmd_geometry(cfg_with(e_list=(1.5,)))["circles"]
    u = c.column("re_u") + 1j * c.column("im_u")
    assert np.max(np.abs(np.abs(u - c.column("center")) - c.column("radius"))) < 1e-12


def test_spectrum_rows(p):
    tables = cli.cmd_spectrum(cfg_with(), 3)
    t = tables["table"]
    assert list(t.column("j")) == [0, 1, 2, 3]
    assert t.data[0, 1] == pytest.approx(0.5 * p.hbar4 * p.omega, abs=1e-10)
    assert t.data[0, 2] == 0.5 * p.hbar4 * p.omega
    assert np.all(t.column("residual") < 1e-5)
    assert len(cli.cmd_spectrum(cfg_with(), 0)["table"].data) == 1


def test_spectrum_writes_files(tmp_path):
    assert cli.main(["spectrum", "--grid-n", "64", "--j-max", "2", "--out", str(tmp_path),
                     "--format", "json"], environ={}) == 0
    names = sorted(f.name for f in tmp_path.iterdir())
    assert names == ["spectrum_mode00.json", "spectrum_mode01.json", "spectrum_mode02.json",
                     "spectrum_table.json"]


def test_cst_single_file_output(tmp_path, p):
    out = tmp_path / "slice.csv"
    assert cli.main(["cst", "--grid-n", "64", "--out", str(out)], environ={}) == 0
    t = read_table(out)
    cfg = cfg_with()
    g = cfg.grids.y_grid(p)
    ref = closed_form_slice(cfg.q, cfg.E, g, g, 0.0, p).values
    got = table_values(t)
    assert np.linalg.norm(got - ref) / np.linalg.norm(ref) < 1e-8
