"""Command-line driver: grammar, exit codes, and deterministic payloads."""

import json

from modulus_lab.cli import main


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_modulus_jump_example(capsys):
    code, out, _ = _run(capsys, ["modulus", "--fn", "heaviside", "--k", "1",
                                 "--q", "1", "--alpha", "0", "--beta", "0",
                                 "--delta", "0.1"])
    assert code == 0
    total = [line for line in out.splitlines() if line.endswith("total")
             or ",total," in line]
    value = float(total[-1].split(",")[1])
    assert abs(value - 0.1) <= 0.002


def test_rate_formula_example(capsys):
    code, out, _ = _run(capsys, ["rates", "upsilon", "--k", "2", "--q", "1",
                                 "--p", "inf", "--alpha", "0", "--beta", "0",
                                 "--delta", "0.1"])
    assert code == 0
    assert "0.01" in out


def test_usage_error_exit_code(capsys):
    code, _, err = _run(capsys, ["bogus"])
    assert code == 1
    assert err


def test_numerical_error_exit_code(capsys):
    code, _, err = _run(capsys, ["rates", "upsilon", "--k", "1", "--q", "2",
                                 "--p", "1"])
    assert code == 2
    assert "error" in err


def test_payload_deterministic(capsys):
    argv = ["modulus", "--fn", "heaviside", "--k", "1", "--q", "2",
            "--delta", "0.05"]
    _, out1, _ = _run(capsys, argv)
    _, out2, _ = _run(capsys, argv)
    assert out1 == out2
    header = [l for l in out1.splitlines() if l.startswith("abscissa,")]
    assert header == ["abscissa,value,component,config_hash"]


def test_json_format_stable_keys(capsys):
    code, out, _ = _run(capsys, ["rates", "upsilon", "--k", "2", "--q", "1",
                                 "--p", "inf", "--delta", "0.1",
                                 "--format", "json"])
    assert code == 0
    start = out.index("{")
    doc = json.loads(out[start:])
    assert list(doc) == sorted(doc)
    assert doc["payload"][0]["component"] == "upsilon"


def test_output_and_plot_files(tmp_path, capsys):
    plot = tmp_path / "curve"
    code, out, _ = _run(capsys, ["modulus", "--fn", "heaviside", "--q", "1",
                                 "--delta", "0.1", "--out", str(tmp_path),
                                 "--plot-data", str(plot)])
    assert code == 0
    csvs = list(tmp_path.glob("modulus_*.csv"))
    assert len(csvs) == 1
    assert csvs[0].read_text().startswith("abscissa,value,component,config_hash")
    dat = (tmp_path / "curve_total.dat").read_text().split()
    assert len(dat) == 2 and abs(float(dat[1]) - 0.1) <= 0.002


def test_catalog_listing(capsys):
    code, out, _ = _run(capsys, ["catalog"])
    assert code == 0
    for name in ("heaviside", "truncated_power", "zeta_spline"):
        assert name in out
    code, out, _ = _run(capsys, ["catalog", "--name", "nonsense"])
    assert code == 2


def test_verify_suite_exit_code(capsys):
    code, out, _ = _run(capsys, ["verify", "--suite", "kernels"])
    assert code == 0
    assert "0 failed" in out
