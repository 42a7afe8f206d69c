import json

import numpy as np
import pytest

from conftest import CASCADE_FILE

from sfgkit.cli import main, parse_rational_literal

NFP_FILE = {
    "nodes": [{"id": 1}, {"id": 2}, {"id": 3}],
    "branches": [{"from": 1, "to": 2, "num": [1], "den": [1]}],
    "input": 1,
    "output": 3,
}


def write_graph(tmp_path, data, name="g.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_parse_rational_literal_forms():
    r = parse_rational_literal("[1,2]/[3,1]")
    assert r.num.coeffs == (1.0, 2.0) and r.den.coeffs == (3.0, 1.0)
    assert parse_rational_literal("2.5").num.coeffs == (2.5,)
    assert parse_rational_literal("[4]").den.coeffs == (1.0,)
    assert parse_rational_literal("1/[1,1]").den.coeffs == (1.0, 1.0)
    with pytest.raises(ValueError):
        parse_rational_literal("[1,[2]]/[1]")


def test_compute_structured(cascade_file, capsys):
    assert main(["compute", cascade_file]) == 0
    data = json.loads(capsys.readouterr().out)
    terms = {
        (tuple(t["symbols"]), t["denominator_side"]): t["numerator"]
        for t in data["terms"]
    }
    assert terms[(("V",), "B")] == [8.0, 2.0]
    assert terms[((), "A")] == [2.0, 3.0, 1.0]
    assert data["variable"] == "s"


def test_compute_table(cascade_file, capsys):
    assert main(["compute", cascade_file, "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "Power of s" in out
    assert "B(s): V" in out


def test_compute_substitution_and_monic(cascade_file, capsys):
    assert main(["compute", cascade_file, "--set", "V=[1]/[3,1]", "--monic"]) == 0
    data = json.loads(capsys.readouterr().out)
    terms = {
        (tuple(t["symbols"]), t["denominator_side"]): t["numerator"]
        for t in data["terms"]
    }
    assert np.allclose(terms[((), "A")], [6, 11, 6, 1])
    assert np.allclose(terms[((), "B")], [8, 2])


def test_compute_dumps_go_to_stderr(cascade_file, capsys):
    assert main(["compute", cascade_file, "--dump-loops", "--dump-combos"]) == 0
    captured = capsys.readouterr()
    assert "loop 0" in captured.err
    assert "order 1" in captured.err
    json.loads(captured.out)  # stdout stays pure JSON


def test_compute_missing_file(tmp_path, capsys):
    assert main(["compute", str(tmp_path / "nope.json")]) == 1
    assert "error:" in capsys.readouterr().err


def test_compute_no_forward_path_exit_code(tmp_path, capsys):
    path = write_graph(tmp_path, NFP_FILE)
    assert main(["compute", path]) == 2
    assert "error:" in capsys.readouterr().err


def test_compute_bad_graph(tmp_path, capsys):
    path = write_graph(tmp_path, {"nodes": "wrong"})
    assert main(["compute", path]) == 1


def test_analyze_inline_tf(capsys):
    assert main(["analyze", "--tf", "num=[8,2] den=[2,3,1]", "--points", "10"]) == 0
    lines = capsys.readouterr().out.splitlines()
    rows = [ln for ln in lines if not ln.startswith("#")]
    assert rows[0] == "omega,re,im,mag_db,phase_deg"
    assert len(rows) == 11
    first = rows[1].split(",")
    w = float(first[0])
    g = (8 + 2j * w) / (2 + 3j * w + (1j * w) ** 2)
    assert np.isclose(float(first[1]), g.real)
    assert np.isclose(float(first[2]), g.imag)


def test_analyze_graph_with_substitution(cascade_file, capsys):
    assert main(["analyze", cascade_file, "--set", "V=[1]/[3,1]",
                 "--points", "5"]) == 0
    out = capsys.readouterr().out
    assert "omega,re,im,mag_db,phase_deg" in out


def test_analyze_symbols_left_is_an_error(cascade_file, capsys):
    assert main(["analyze", cascade_file]) == 1
    assert "symbol" in capsys.readouterr().err


def test_analyze_blocks(capsys):
    assert main(["analyze", "--tf", "num=[8,2] den=[2,3,1]", "--points", "5",
                 "--routh", "--roots", "--reduce", "1"]) == 0
    out = capsys.readouterr().out
    assert "# routh verdict=stable sign_changes=0" in out
    assert "# pole -1" in out
    assert "# zero -4" in out
    reduced = [ln for ln in out.splitlines() if ln.startswith("# reduced")]
    assert len(reduced) == 1
    from sfgkit.poly import parse_rational_text

    r = parse_rational_text(reduced[0].removeprefix("# reduced "))
    assert np.allclose(r.num.coeffs, [4.0])
    assert np.allclose(r.den.coeffs, [1.0, 1.25])


def test_analyze_figures(tmp_path, capsys):
    plot_dir = tmp_path / "figs"
    assert main(["analyze", "--tf", "num=[1] den=[1,1]", "--points", "16",
                 "--plot-dir", str(plot_dir)]) == 0
    out = capsys.readouterr().out
    for name in ("bode.png", "nyquist.png"):
        f = plot_dir / name
        assert f.exists() and f.stat().st_size > 1000
        assert name in out


def test_analyze_selected_figure_only(tmp_path, capsys):
    plot_dir = tmp_path / "figs"
    assert main(["analyze", "--tf", "num=[1] den=[1,1]", "--points", "16",
                 "--bode", "--plot-dir", str(plot_dir)]) == 0
    capsys.readouterr()
    assert (plot_dir / "bode.png").exists()
    assert not (plot_dir / "nyquist.png").exists()


def test_analyze_reduction_figure(tmp_path, capsys):
    plot_dir = tmp_path / "figs"
    assert main(["analyze", "--tf", "num=[8,2] den=[2,3,1]", "--points", "16",
                 "--reduce", "1", "--plot-dir", str(plot_dir)]) == 0
    capsys.readouterr()
    assert (plot_dir / "reduction.png").exists()


def test_analyze_rejects_both_sources(cascade_file, capsys):
    assert main(["analyze", cascade_file, "--tf", "num=[1] den=[1]"]) == 1


def test_analyze_rejects_neither_source(capsys):
    assert main(["analyze"]) == 1


def test_oracle_command(cascade_file, capsys):
    assert main(["oracle", cascade_file, "--s", "1,0", "--set", "V=0.25"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert np.isclose(data["value"][0], 10 / 24)
    assert np.isclose(data["value"][1], 0.0)


def test_oracle_complex_literal(cascade_file, capsys):
    assert main(["oracle", cascade_file, "--s", "1+2j", "--set", "V=1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["s0"] == [1.0, 2.0]


def test_oracle_bad_frequency(cascade_file, capsys):
    assert main(["oracle", cascade_file, "--s", "one"]) == 1
