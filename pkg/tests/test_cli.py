import json
import subprocess
import sys

import numpy as np
import pytest

from qdesigns.classical import format_square, latin_cyclic, ols_odd, parse_pair
from qdesigns.cli import main
from qdesigns.quantum import design_to_json, QOLSDesign
from qdesigns.search import random_unitary
from qdesigns.tensor_core import matrix_from_json, matrix_to_json


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def write_matrix(path, m):
    path.write_text(json.dumps(matrix_to_json(m)))
    return path


@pytest.mark.parametrize("target", ["u", "r", "gamma"])
def test_golden_matrices(capsys, tmp_path, target):
    out = tmp_path / f"{target}.json"
    code, text = run(capsys, "golden", target, "--out", out)
    assert code == 0
    assert "2-unitary: PASS" in text
    m = matrix_from_json(json.loads(out.read_text()))
    assert m.shape == (36, 36)


def test_golden_u_then_verify(capsys, tmp_path):
    out = tmp_path / "u.json"
    assert run(capsys, "golden", "u", "--out", out)[0] == 0
    code, text = run(capsys, "verify", out)
    assert code == 0 and "overall   PASS" in text


def test_golden_blocks(capsys, tmp_path):
    out = tmp_path / "blocks.json"
    code, text = run(capsys, "golden", "blocks", "--out", out)
    assert code == 0 and "block form: PASS" in text
    obj = json.loads(out.read_text())
    assert len(obj["blocks"]) == 9
    assert all(b["rows"] == b["cols"] == 4 for b in obj["blocks"])
    assert obj["p1"][:4] == [6, 2, 36, 24]


def test_golden_chess(capsys, tmp_path):
    out = tmp_path / "chess.json"
    code, text = run(capsys, "golden", "chess", "--out", out)
    assert code == 0 and "round trip: PASS" in text
    records = json.loads(out.read_text())
    assert {tuple(r["row"]) for r in records} == {(i, j) for i in range(6) for j in range(6)}
    assert set(records[0]) == {"row", "figure", "color", "amp", "phase"}
    code, text = run(capsys, "golden", "chess")
    assert code == 0 and "psi_10: c w^10 magenta knight" in text


def test_golden_json_output(capsys):
    code, text = run(capsys, "golden", "u", "--json")
    assert code == 0
    assert json.loads(text)["report"]["passed"] is True


def test_verify_random_unitary(capsys, tmp_path):
    path = write_matrix(tmp_path / "r.json", random_unitary(9, np.random.default_rng(0)))
    code, text = run(capsys, "verify", path)
    assert code == 1
    lines = {ln.split()[0]: ln.split()[1] for ln in text.splitlines()[1:]}
    assert lines["A'"] == "PASS" and lines["2U_R"] == "FAIL"
    code, text = run(capsys, "verify", path, "--json")
    assert code == 1 and json.loads(text)["passed"] is False


def test_verify_tolerance_flag(capsys, tmp_path):
    from qdesigns.golden import build_golden_u
    u = build_golden_u().copy()
    u[0, 0] += 1e-7
    path = write_matrix(tmp_path / "u.json", u)
    assert run(capsys, "verify", path)[0] == 1
    assert run(capsys, "verify", path, "--tolerance", "1e-5")[0] == 0


def test_verify_qols_format(capsys, tmp_path):
    from qdesigns.classical import GL3
    from qdesigns.quantum import embed_classical
    path = tmp_path / "q.json"
    path.write_text(json.dumps(design_to_json(embed_classical(GL3))))
    assert run(capsys, "verify", path)[0] == 0


def test_verify_usage_errors(capsys, tmp_path):
    path = write_matrix(tmp_path / "m35.json", np.eye(35))
    assert main(["verify", str(path)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", str(bad)]) == 2
    other = tmp_path / "other.json"
    other.write_text(json.dumps({"hello": 1}))
    assert main(["verify", str(other)]) == 2
    assert main(["verify", str(tmp_path / "missing.json")]) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_usage_errors(capsys):
    for argv in ([], ["golden", "nope"], ["classical", "bogus", "3"], ["search"], ["search", "x"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_classical_build_ols(capsys, tmp_path):
    out = tmp_path / "pair.txt"
    code, text = run(capsys, "classical", "build-ols", 5, "--out", out)
    assert code == 0 and "orthogonal: yes" in text
    assert parse_pair(out.read_text()) == ols_odd(5)
    code, text = run(capsys, "classical", "build-ols", 4)
    assert code == 0 and "orthogonal: yes" in text
    code, text = run(capsys, "classical", "build-ols", 2)
    assert code == 1 and "search exhausted" in text
    assert main(["classical", "build-ols", "6"]) == 2
    assert main(["classical", "build-ols"]) == 2


def test_classical_magic(capsys, tmp_path):
    code, text = run(capsys, "classical", "magic", 3)
    assert code == 0 and "magic sum 15" in text
    out = tmp_path / "magic.json"
    code, text = run(capsys, "classical", "magic", 5, "--out", out)
    assert json.loads(out.read_text())["sum"] == 65


def test_classical_encode(capsys, tmp_path):
    out = tmp_path / "p9.json"
    code, text = run(capsys, "classical", "encode", 3, "--out", out)
    assert code == 0 and "2-unitary: PASS" in text
    p = matrix_from_json(json.loads(out.read_text())).real
    assert np.array_equal(np.argmax(p, axis=1), [4, 2, 6, 0, 7, 5, 8, 3, 1])


def test_classical_mate(capsys, tmp_path):
    square = tmp_path / "c6.txt"
    square.write_text(format_square(latin_cyclic(6)))
    code, text = run(capsys, "classical", "mate", "--in", square)
    assert code == 1 and "no orthogonal mate (search exhausted)" in text
    code, text = run(capsys, "classical", "mate", 6)
    assert code == 1 and "no orthogonal mate (search exhausted)" in text
    out = tmp_path / "pair5.txt"
    code, text = run(capsys, "classical", "mate", 5, "--out", out)
    assert code == 0 and "orthogonal mate" in text
    assert parse_pair(out.read_text()).first == latin_cyclic(5)
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n0 0\n1 1\n")
    assert main(["classical", "mate", "--in", str(bad)]) == 2
    assert main(["classical", "mate"]) == 2
    assert main(["classical", "mate", "8"]) == 2


def test_search_d3(capsys, tmp_path):
    code, text = run(capsys, "search", 3, "--seeds", 3, "--out", tmp_path)
    assert code == 0
    assert "converged: 3/3, certified: 3/3" in text
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["converged"] == summary["certified"] == 3
    assert (tmp_path / "trace_seed0.jsonl").exists()
    m = matrix_from_json(json.loads((tmp_path / "matrix_seed0.json").read_text()))
    assert m.shape == (9, 9)


def test_search_d2(capsys):
    code, text = run(capsys, "search", 2, "--seeds", 5)
    assert code == 0 and "converged: 0/5" in text


def test_search_d6_short(capsys, tmp_path):
    code, text = run(capsys, "search", 6, "--seeds", 1, "--iterations", 10, "--out", tmp_path)
    assert code == 0 and "not converged after 10 sweeps" in text
    assert len((tmp_path / "trace_seed0.jsonl").read_text().splitlines()) == 10


def test_search_usage_errors():
    assert main(["search", "1"]) == 2
    assert main(["search", "3", "--damping", "0"]) == 2


def test_search_workers_match_serial(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "search", 3, "--seeds", 4, "--out", a)
    run(capsys, "search", 3, "--seeds", 4, "--workers", 2, "--out", b)
    for f in sorted(p.name for p in a.iterdir()):
        assert (a / f).read_bytes() == (b / f).read_bytes()


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "qdesigns.cli", "classical", "magic", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "magic sum 15" in proc.stdout
