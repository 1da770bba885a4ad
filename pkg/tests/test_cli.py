import json
import subprocess
import sys

import pytest

from complicial import cli, serialize
from complicial import simplex as sx


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dump_delta_one(capsys):
    code, out, _ = run(["dump", "delta", "1"], capsys)
    assert code == 0
    recs = [ln for ln in out.splitlines() if ln[:1].isdigit()]
    assert len(recs) == 3
    assert serialize.parse_complex(out).same_as(sx.delta(1))


def test_dump_Psi_blocks(capsys):
    code, out, _ = run(["dump", "Psi", "s=(2)"], capsys)
    assert code == 0
    rows = [ln for ln in out.splitlines() if ln.startswith("dim") and " rows " in ln]
    assert sum(len(r.split()) - 3 for r in rows) == 7


def test_dump_colim_listing(capsys):
    code, out, _ = run(["dump", "colim", "tag=2", "m=1", "i=0"], capsys)
    assert code == 0
    assert out.splitlines()[-1] == "order eta_x[0] eta_x[0,1] eta_x[1]=eta_y[0] eta_y[0,1] eta_y[1]"
    K = serialize.parse_complex(out[:out.index("\nleg")])
    assert len(K) == 5


def test_dump_structured(capsys):
    code, out, _ = run(["dump", "psi", "s=(2,1,2)", "i=1", "--format", "structured"], capsys)
    assert code == 0
    assert json.loads(out)["kind"] == "matrix"


@pytest.mark.parametrize("argv,rows", [
    (["enumerate", "nu", "delta", "2", "--dim", "1", "--bound", "3"], 7),
    (["enumerate", "nu", "delta", "0", "--dim", "5"], 1),
    (["enumerate", "lam", "delta", "1", "--dim", "1"], 3),
    (["enumerate", "lam", "delta", "2", "--dim", "2"], 15),
])
def test_enumerate(argv, rows, capsys):
    code, out, _ = run(argv + ["--format", "structured"], capsys)
    res = json.loads(out)
    assert code == 0 and res["complete"] and len(res["rows"]) == rows
    assert len(set(res["rows"])) == rows


@pytest.mark.parametrize("selector", [["delta"], ["delta", "x"], ["psi", "s=(2,1"], ["Psi"],
                                      ["colim", "tag=3", "m=1", "i=0"], ["bogus", "1"]])
def test_dump_errors(selector, capsys):
    code, _, err = run(["dump"] + selector, capsys)
    assert code == 2 and err.startswith("error:")


def test_selector_error_position():
    with pytest.raises(cli.SelectorError) as e:
        cli.parse_selector("psi s=(2,1 i=1")
    assert e.value.col == 5
    with pytest.raises(cli.SelectorError) as e:
        cli.parse_selector("delta 2x")
    assert e.value.col == 7


@pytest.mark.parametrize("argv", [
    ["verify", "kernel", "--max-size", "3"],
    ["verify", "simplicity", "--max-size", "3"],
    ["verify", "squares", "--max-size", "3"],
    ["verify", "axioms", "--model", "lambda-delta 2", "--cutoff", "4"],
    ["verify", "axioms", "--model", "nu-delta 2", "--cutoff", "2", "--bound", "3"],
    ["verify", "pullbacks", "--max-size", "3", "--target", "1"],
    ["verify", "reconstruction", "--max-size", "3", "--target", "1"],
    ["verify", "equivalence", "--max-size", "3", "--target", "2"],
    ["verify", "colimits", "--max-size", "2"],
])
def test_verify_suites_pass(argv, capsys):
    code, out, _ = run(argv + ["--format", "structured"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["counts"]["fail"] == 0 and rep["counts"]["pass"] > 0


def test_verify_is_deterministic(capsys):
    argv = ["verify", "pullbacks", "--max-size", "2", "--target", "1", "--format", "structured"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second


def test_incomplete_enumeration_fails(capsys):
    # a coefficient bound of 0 cuts off every solution
    code, out, _ = run(["verify", "axioms", "--model", "nu-delta 1", "--cutoff", "1", "--bound", "0",
                        "--format", "structured"], capsys)
    assert code == 1 and json.loads(out)["counts"]["incomplete"] > 0


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.txt"
    assert cli.main(["verify", "kernel", "--max-size", "2", "--out", str(path)]) == 0
    assert path.read_text().startswith("suite kernel: PASS")


def test_workers_give_the_same_report(capsys):
    argv = ["verify", "simplicity", "--max-size", "2", "--format", "structured"]
    _, one, _ = run(argv, capsys)
    _, two, _ = run(argv + ["--workers", "2"], capsys)
    assert one == two


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "complicial", "dump", "delta", "0"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "0 [0] aug 1" in res.stdout
