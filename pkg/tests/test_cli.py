import json
import subprocess
import sys

import pytest

from raagaut.cli import FAIL, INPUT_ERROR, OK, main

OBSTRUCTION = "lc({a,r,s},v) tr(v,a) tr(v,b) tr(v,a^-1)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_text_and_tsv(capsys):
    code, out, _ = run(capsys, "analyze", "--graph", "GO")
    assert code == OK
    assert "g b a f e d c" in out and "[heights]" in out
    code, out, _ = run(capsys, "analyze", "GD", "--format", "tsv")
    rows = [line.split("\t") for line in out.strip().splitlines()]
    assert rows[0] == ["section", "key", "value"]
    assert ["adm", "v", "{v,c,a,b}"] in rows
    assert any(r[0] == "balance" and "witness=(v,a,b)" in r[2] for r in rows)


def test_analyze_accepts_a_graph_file_and_tie_breaks(tmp_path, capsys):
    gfile = tmp_path / "p.graph"
    gfile.write_text("vertices: a b c\nedge: a b\nedge: b c\n")
    order = tmp_path / "order"
    order.write_text("c b a\n")
    code, out, _ = run(capsys, "analyze", str(gfile), "--tie-break", str(order), "--format", "json")
    assert code == OK
    data = json.loads(out)
    assert data["order"]["ascending"].split() == ["a", "c", "b"]
    code, out, _ = run(capsys, "analyze", str(gfile), "--format", "json")
    assert json.loads(out)["order"]["ascending"].split() == ["c", "a", "b"]


def test_analyze_report_writes_figures(tmp_path, capsys):
    code, _, err = run(capsys, "analyze", "GA", "--report", str(tmp_path))
    assert code == OK
    for name in ("analysis.tsv", "graph.png", "lattice_K.png", "lattice_L.png"):
        path = tmp_path / name
        assert path.exists() and path.stat().st_size > 0
    assert (tmp_path / "graph.png").read_bytes()[:4] == b"\x89PNG"
    assert "wrote" in err


def test_normal_form_and_equality(capsys):
    code, out, _ = run(capsys, "nf", "--graph", "P4", "b a a^-1 c a")
    assert (code, out.strip()) == (OK, "b c a")
    assert run(capsys, "eq", "--graph", "P4", "a b", "b a")[0] == OK
    code, out, _ = run(capsys, "eq", "--graph", "P4", "a c", "c a")
    assert (code, out.strip()) == (FAIL, "not equal")


def test_aut_eval_and_compose(capsys):
    code, out, _ = run(capsys, "aut", "eval", OBSTRUCTION, "--graph", "GD", "--on", "v")
    assert (code, out.strip()) == (OK, "v -> v a^-1 b a")
    code, out, _ = run(capsys, "aut", "eval", "tr(v,a)", "--graph", "GD", "--format", "json")
    assert json.loads(out)["v"] == "v a"
    code, out, _ = run(capsys, "aut", "compose", "tr(v,a)", "inv(a)", "--graph", "GD")
    assert code == OK and "v -> v a^-1" in out


def test_aut_classify_and_factor(capsys):
    code, out, _ = run(capsys, "aut", "classify", 'inner("v")', "--graph", "GD")
    assert code == OK and out.splitlines()[1].split()[:2] == ["Inn", "yes"]
    code, out, _ = run(capsys, "aut", "classify", "tr(v,a)", "--graph", "GD", "--format", "json")
    assert json.loads(out)["conjugating"]["status"] == "no"
    code, out, _ = run(capsys, "aut", "factor", "lc({b,t},v) lc({r,s},c)^-1", "--graph", "GD")
    assert code == OK and "lc(" in out
    code, _, err = run(capsys, "aut", "factor", "tr(v,a)", "--graph", "GD")
    assert code == FAIL and "not factored" in err


def test_relators_verify_and_report(tmp_path, capsys):
    code, out, _ = run(capsys, "relators", "verify", "P3_P3", "--families", "W,D,sigma", "--format", "text")
    assert code == OK and out.strip().splitlines()[-1].startswith("total")
    code, out, _ = run(capsys, "relators", "verify", "P3_P3", "--families", "R1-R3", "--report", str(tmp_path))
    assert code == OK
    assert out.startswith("family\tbindings\tverdict")
    assert (tmp_path / "relators.tsv").exists() and (tmp_path / "relators.png").exists()


def test_presentation_emit(capsys):
    code, out, _ = run(capsys, "presentation", "emit", "--graph", "P3_P3", "--format", "json")
    data = json.loads(out)
    assert code == OK and data["generators"] and data["relators"]


def test_export_formats(capsys):
    code, out, _ = run(capsys, "export", "--graph", "P4", "--format", "dot")
    assert code == OK and out.count("--") == 3
    code, out, _ = run(capsys, "export", "--graph", "P4", "--lattice", "K", "--format", "json")
    assert len(json.loads(out)["elements"]) > 1
    code, out, _ = run(capsys, "export", "--graph", "P4")
    assert out.startswith("vertices: a b c d")


@pytest.mark.parametrize("argv", [
    ["nf", "--graph", "P4", "z"],
    ["nf", "--graph", "no_such_graph", "a"],
    ["nf", "a"],
    ["aut", "eval", "tr(a,d)", "--graph", "P4"],
    ["aut", "compose", "tr(a,b)", "--graph", "P4"],
])
def test_input_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == INPUT_ERROR and err.startswith("error:")


def test_console_entry_point_runs_as_module():
    proc = subprocess.run([sys.executable, "-m", "raagaut.cli", "nf", "--graph", "P4", "a b a^-1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "b"
