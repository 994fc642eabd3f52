import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from varheat.cli import main
from varheat.config import parse_config_text, named_profile
from varheat.errors import ConfigError


BASE_CFG = """
sigma.kind = parabolic24
profile.kind = quadratic
series.N = 2
solve.x_points = 11
solve.times = 1
eigs.count = 3
"""


def test_parse_defaults_and_overrides():
    cfg = parse_config_text(BASE_CFG)
    assert cfg.sigma_kind == "parabolic24"
    assert cfg.solve_times == [1.0]
    assert cfg.solve_x_points == 11
    assert cfg.eigs_count == 3
    spec = cfg.series_spec()
    assert spec.truncation_N == 2 and spec.quad_order == 32


def test_parse_comments_and_lists():
    cfg = parse_config_text("solve.times = 0.25, 1, 4  # three times\n")
    assert cfg.solve_times == [0.25, 1.0, 4.0]


def test_unknown_key_named_in_error():
    with pytest.raises(ConfigError) as err:
        parse_config_text("sigma.kindd = constant\n", source="bad.cfg")
    assert "sigma.kindd" in str(err.value)
    assert "bad.cfg:1" in str(err.value)


def test_bad_values_rejected():
    with pytest.raises(ConfigError):
        parse_config_text("series.N = two\n")
    with pytest.raises(ConfigError):
        parse_config_text("sigma.kind = gaussian\n")
    with pytest.raises(ConfigError):
        parse_config_text("solve.times = -1\n")


def test_named_profiles():
    q = named_profile("quadratic")
    assert q(np.array([0.5]))[0] == 0.25
    s = named_profile("sine")
    assert s(np.array([0.5]))[0] == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        named_profile("table")


def _write_cfg(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return str(path)


def test_cli_solve_csv(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, BASE_CFG)
    out = tmp_path / "solve.csv"
    rc = main(["solve", "--config", cfg, "--out", str(out)])
    assert rc == 0
    lines = out.read_text().split("\n")
    assert lines[0] == "x,t,q,imag_residual,N"
    assert lines[-1] == ""  # LF-terminated
    # 11 points x 3 truncations
    assert len([ln for ln in lines if ln]) == 1 + 33
    report = capsys.readouterr().out
    assert "max |q_N - exact|" in report


def test_cli_solve_constant_matches_fourier(tmp_path):
    from varheat.oracles import fourier_solution

    cfg = _write_cfg(tmp_path, """
sigma.kind = constant
sigma.value = 1
profile.kind = sine
series.N = 1
solve.x_points = 9
solve.times = 0.1
""")
    out = tmp_path / "s.csv"
    assert main(["solve", "--config", cfg, "--out", str(out)]) == 0
    rows = [ln.split(",") for ln in out.read_text().splitlines()[1:]]
    for x_, t_, q_, res_, n_ in rows:
        ref = fourier_solution(1.0, lambda v: np.sin(np.pi * v), float(x_),
                               float(t_), 50)
        assert abs(float(q_) - ref) < 1e-8


def test_cli_solve_deterministic(tmp_path):
    cfg = _write_cfg(tmp_path, BASE_CFG)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["solve", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["solve", "--config", cfg, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_solve_svg(tmp_path):
    cfg = _write_cfg(tmp_path, BASE_CFG + f"output.svg = {tmp_path}/fig.svg\n")
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "s.csv")]) == 0
    tree = ET.parse(tmp_path / "fig.svg")
    root = tree.getroot()
    assert root.tag.endswith("svg")
    assert root.attrib.get("version") == "1.1"
    polylines = [el for el in root.iter() if el.tag.endswith("polyline")]
    assert len(polylines) >= 4  # three truncations + exact overlay


def test_cli_eigs_json_roundtrip(tmp_path):
    cfg = _write_cfg(tmp_path, BASE_CFG)
    out = tmp_path / "eigs.json"
    rc = main(["eigs", "--config", cfg, "--count", "4", "--format", "json",
               "--out", str(out)])
    assert rc == 0
    records = json.loads(out.read_text())
    assert [r["m"] for r in records] == [1, 2, 3, 4]
    for rec, ref in zip(records, (-1.0006, -4.2542, -9.6814, -17.2801)):
        assert abs(rec["lambda"] - ref) < 5e-4
        assert rec["N"] == 2
        assert rec["abs_diff"] == abs(rec["lambda"] - rec["fd_lambda"])
    # serialize -> parse -> serialize is the identity
    text2 = json.dumps(records, indent=2, sort_keys=True) + "\n"
    assert text2 == out.read_text()


def test_cli_eigs_constant(tmp_path):
    cfg = _write_cfg(tmp_path, "sigma.kind = constant\nsigma.value = 1\n")
    out = tmp_path / "e.json"
    assert main(["eigs", "--config", cfg, "--count", "2", "--format", "json",
                 "--out", str(out)]) == 0
    records = json.loads(out.read_text())
    for rec, m in zip(records, (1, 2)):
        assert abs(rec["lambda"] + (m * math.pi) ** 2) < 1e-9


def test_cli_eigfuns(tmp_path):
    cfg = _write_cfg(tmp_path, """
sigma.kind = parabolic24
eigfuns.modes = 1,2
eigfuns.x_points = 41
eigfuns.truncations = 0,2
""" + f"output.svg = {tmp_path}/ef.svg\n")
    out = tmp_path / "ef.csv"
    assert main(["eigfuns", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,X1_N0,X2_N0,X1_N2,X2_N2"
    assert len(lines) == 42
    first = [float(v) for v in lines[1].split(",")]
    last = [float(v) for v in lines[-1].split(",")]
    assert all(abs(v) < 1e-8 for v in first[1:])
    assert all(abs(v) < 1e-7 for v in last[1:])
    assert (tmp_path / "ef.svg").exists()


def test_cli_exit_code_2_on_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("sigma.what = 3\n")
    rc = main(["solve", "--config", str(bad)])
    assert rc == 2
    assert "sigma.what" in capsys.readouterr().err


def test_cli_exit_code_2_on_missing_file():
    assert main(["solve", "--config", "/nonexistent/x.cfg"]) == 2


def test_cli_exit_code_2_on_bad_contour(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, "contour.r = 9\ncontour.kmax = 2\nsolve.x_points = 3\n")
    assert main(["solve", "--config", cfg]) == 2
    assert "contour" in capsys.readouterr().err


def test_cli_exit_code_1_on_numerical_failure(tmp_path, capsys):
    # truncation radius far too small for the requested time
    cfg = _write_cfg(tmp_path, """
sigma.kind = parabolic24
profile.kind = quadratic
solve.x_points = 5
solve.times = 0.05
contour.kmax = 1.2
""")
    rc = main(["solve", "--config", cfg, "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "numerical failure" in capsys.readouterr().err


def test_cli_verify_table1(capsys):
    rc = main(["verify", "table1"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.count("[PASS]") == 12
    assert "12/12" in out


def test_cli_verify_determinant(capsys):
    rc = main(["verify", "determinant"])
    assert rc == 0
    assert "[PASS]" in capsys.readouterr().out


def test_cli_verify_convergence(capsys):
    rc = main(["verify", "convergence"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 3
