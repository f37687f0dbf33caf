import json
import subprocess
import sys

import pytest

from dagwitt.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


def test_witt_mul_teichmuller(capsys):
    code, out, _ = call(capsys, "witt", "mul", "--p", "3", "--N", "2", "--a", "[x]", "--b", "[x]")
    assert code == 0
    assert out["components"] == ["x^2", "0"]
    assert out["schema"] == 1 and out["valid_mod"] == "3^2"


def test_tf_coordinate(capsys):
    code, out, _ = call(capsys, "tf", "--p", "3", "--N", "3", "--F", "x^3", "--input", "x")
    assert code == 0 and out["components"] == ["x", "0", "0"]


def test_tf_form(capsys):
    code, out, _ = call(capsys, "tf", "--p", "3", "--N", "3", "--F", "x^3", "--input", "x^2 dx")
    assert code == 0 and out["text"] == "1*[x^2]·d[x]"


def test_drw_normalize(capsys):
    code, out, _ = call(capsys, "drw-normalize", "--p", "3", "--N", "3", "--expr", "V[x]*dV[x]")
    assert code == 0 and out["text"] == "6*dV^1[x^2]" and out["strategies_agree"]


def test_pushforward_keys(capsys):
    code, out, _ = call(capsys, "pushforward", "--p", "3", "--N", "2", "--connection", "x dx")
    assert code == 0
    assert {"diagram_commutes", "integrable", "quasinilpotent_proxy", "gauge"} <= set(out)


def test_pushforward_rank_two(capsys):
    code, out, _ = call(capsys, "pushforward", "--p", "3", "--N", "2", "--connection", "0, dx", "--connection", "0, 0")
    assert code == 0 and out["gauge"]["rank"] == 2


def test_homotopy_check(capsys):
    code, out, _ = call(
        capsys, "homotopy-check", "--p", "3", "--N", "4", "--F1", "x^3", "--F2", "x^3+3x", "--max-deg", "6", "--rank", "1"
    )
    assert code == 0 and out["pass"]
    assert out["coefficient_residuals"]


def test_compare(capsys):
    code, out, _ = call(capsys, "compare", "--p", "3", "--N", "3", "--D", "6", "--vars", "1", "--connection", "3*x^2 dx")
    assert code == 0 and out["pass"] and out["bound"] == 0


def test_frac_acyclicity(capsys):
    code, out, _ = call(capsys, "frac-acyclicity", "--p", "3", "--N", "2", "--D", "3", "--vars", "1")
    assert code == 0 and out["pass"]


def test_acceptance_single(capsys):
    code, out, err = call(capsys, "acceptance", "--suite", "9")
    assert code == 0 and out["pass"]
    assert "criterion 9" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["witt", "mul", "--p", "4", "--N", "2", "--a", "[x]", "--b", "[x]"],
        ["witt", "mul", "--p", "3", "--N", "2", "--a", "[x"],
        ["tf", "--p", "3", "--N", "3", "--F", "x^3+x", "--input", "x"],
        ["pushforward", "--p", "3", "--N", "2", "--vars", "2", "--connection", "y dx"],
        ["acceptance", "--suite", "11"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out is None and "error" in err


def test_argparse_usage_exit_code():
    with pytest.raises(SystemExit) as exc:
        run(["witt"])
    assert exc.value.code == 2


def test_check_failure_exit_code(capsys):
    # degree 9 needs T^8 dT, losing two digits; N = 2 cannot afford that
    code, out, _ = call(capsys, "homotopy-check", "--p", "3", "--N", "2", "--F1", "x^3", "--F2", "x^3+3x", "--max-deg", "9")
    assert code == 1 and out["error"].startswith("PrecisionBudgetExceeded")


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = call(capsys, "witt", "add", "--p", "3", "--N", "2", "--a", "(x, 0)", "--b", "(x, 0)", "--output", str(target))
    assert code == 0 and json.loads(target.read_text()) == out
    assert out["components"] == ["2*x", "x^3"]


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "dagwitt.cli", "witt", "mul", "--p", "3", "--N", "3", "--a", "(x, y)", "--b", "[x]", "--vars", "2"]
    a, b = (subprocess.run(argv, capture_output=True) for _ in range(2))
    assert a.returncode == 0 and a.stdout == b.stdout
