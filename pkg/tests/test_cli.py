import json
import subprocess
import sys

import pytest

from ccc_forge.cli import GridSpec, UsageError, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_field_command(capsys):
    code, out, _ = run(capsys, "field", "--p", "3", "--m", "4")
    assert code == 0
    assert "modulus = 2,1,0,0,1" in out and "tau = +1" in out and "q = 81" in out
    _, out, _ = run(capsys, "field", "--p", "3", "--m", "3")
    assert "epsilon = +1" in out


@pytest.mark.parametrize("argv", [["field", "--p", "4", "--m", "2"], ["code", "--p", "9", "--m", "2", "--alpha", "1"]])
def test_bad_prime_is_usage_error(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert "p must be an odd prime" in err


def test_argparse_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["code", "--p", "3"])
    assert exc.value.code == 1
    assert run(capsys, "ccc", "--p", "3", "--m", "2", "--alpha", "0", "--gamma", "1")[0] == 1
    assert run(capsys, "code", "--p", "3", "--m", "2", "--alpha", "1", "--threads", "0")[0] == 1


def test_code_golden(capsys):
    code, out, _ = run(capsys, "code", "--p", "5", "--m", "3", "--alpha", "1")
    rec = json.loads(out)
    assert code == 0
    assert (rec["n"], rec["k"], rec["d"], rec["verdict"]) == (30, 3, 20, "match")


def test_code_degenerate_exits_2(capsys):
    code, out, _ = run(capsys, "code", "--p", "3", "--m", "2", "--alpha", "1", "--format", "csv")
    assert code == 2
    assert out == "weight,frequency\n0,3\n2,6\n"


def test_code_alpha_zero_is_measurement_only(capsys):
    code, out, _ = run(capsys, "code", "--p", "3", "--m", "3", "--alpha", "0")
    assert code == 0
    assert json.loads(out)["verdict"] == "inapplicable"


def test_matrix_and_export(capsys):
    _, mat, _ = run(capsys, "code", "--p", "3", "--m", "2", "--alpha", "1", "--format", "matrix")
    _, exp, _ = run(capsys, "export", "--p", "3", "--m", "2", "--alpha", "1", "--kind", "generator-matrix")
    assert mat == exp
    assert len(mat.splitlines()) == 2
    _, ds, _ = run(capsys, "export", "--p", "3", "--m", "2", "--alpha", "1", "--kind", "defining-set")
    assert ds == "3\n6\n"


def test_ccc_command(capsys):
    code, out, _ = run(capsys, "ccc", "--p", "3", "--m", "4", "--alpha", "1", "--gamma", "2")
    rec = json.loads(out)
    assert code == 0
    assert rec["omega"] == [6, 12, 12]
    assert rec["verdicts"]["theorem2_printed"] == "mismatch"
    assert rec["verdicts"]["theorem2_derived"] == "match"
    code, out, _ = run(capsys, "ccc", "--p", "3", "--m", "2", "--alpha", "1", "--gamma", "1")
    assert code == 2  # degenerate field


def test_grid_parsing():
    g = GridSpec.parse("p=3,5;m=2;alpha=square;gamma=nonsquare")
    assert g.expand() == [(3, 2, [1], [2]), (5, 2, [1, 4], [2, 3])]
    assert GridSpec.parse("p=3;m=6;alpha=1").expand() == [(3, 6, [1], [0, 1, 2])]
    for bad in ["p=3", "m=2", "p=3;m=2;alpha=0", "p=;m=2", "p=3;m=2;beta=1", "p=x;m=2"]:
        with pytest.raises(UsageError):
            GridSpec.parse(bad).expand()


def test_empty_grid_and_cap(capsys, monkeypatch):
    assert run(capsys, "verify", "--grid", "")[0] == 1
    assert run(capsys, "verify", "--grid", "p=3;m=13")[0] == 1
    monkeypatch.setenv("CCC_FORGE_MAX_Q", "50")
    assert run(capsys, "verify", "--grid", "p=3;m=4")[0] == 1


def test_verify_small_grid(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "verify", "--grid", "p=3,5;m=2,4", "--out", str(out))
    assert code == 0 and stdout == ""
    rep = json.loads(out.read_text())
    assert rep["schema"] == 1 and rep["tool"] == "ccc-forge"
    claims = {e["claim"] for e in rep["entries"]}
    assert {"lemma1.gauss_sum", "lemma2.quadratic_weil_sum", "theorem1.weight_distribution", "theorem2.ccc_parameters"} <= claims
    assert sum(rep["summary"].values()) == len(rep["entries"])


def test_verify_threads_byte_identical(capsys):
    _, one, _ = run(capsys, "verify", "--grid", "p=3;m=6;alpha=1", "--grid", "p=5;m=4;gamma=1")
    _, four, _ = run(capsys, "verify", "--grid", "p=3;m=6;alpha=1", "--grid", "p=5;m=4;gamma=1", "--threads", "4")
    assert one == four


def test_code_output_independent_of_modulus(capsys):
    _, a, _ = run(capsys, "code", "--p", "3", "--m", "4", "--alpha", "2", "--format", "csv")
    _, b, _ = run(capsys, "code", "--p", "3", "--m", "4", "--alpha", "2", "--format", "csv", "--modulus", "2,2,0,0,1")
    assert a == b
    assert run(capsys, "code", "--p", "3", "--m", "2", "--alpha", "1", "--modulus", "2,0,1")[0] == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ccc_forge", "field", "--p", "5", "--m", "2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "tau = +1" in res.stdout
