"""CLI tests driven in-process through run_cli."""

import json
from pathlib import Path

import pytest

from hyperdec.cli import run_cli

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_lightstone_compare(capsys):
    code, out, err = run(capsys, "eval", "nines(H)", "--lightstone")
    assert code == 0
    assert out == "1 - eps\n.999…;…9̂\ncompare to 1: Less\n"


def test_st(capsys):
    code, out, _ = run(capsys, "st", "nines(H)")
    assert (code, out) == (0, "1\n")


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "1/eps")
    assert (code, out) == (0, "infinite (sign 1)\n")
    code, out, _ = run(capsys, "classify", "eps - eps")
    assert (code, out) == (0, "infinitesimal (sign 0)\n")


def test_lightstone_subcommand(capsys):
    code, out, _ = run(capsys, "lightstone", "1/4 - eps")
    assert (code, out) == (0, ".249;…9̂\n")


def test_digits(capsys):
    code, out, _ = run(capsys, "digits", "1 - eps", "1", "1:0")
    assert (code, out) == (0, "1: 9\n1:0: 9\n")


def test_deriv_exact(capsys):
    code, out, _ = run(capsys, "deriv", "x^2", "--at", "3")
    assert (code, out) == (0, "6\n")


def test_deriv_at_hyper_point_rejected(capsys):
    code, out, err = run(capsys, "deriv", "x^2", "--at", "1 - eps")
    assert code == 2
    assert "standard point" in err


def test_lim(capsys):
    code, out, _ = run(capsys, "lim", "n/(n+1)")
    assert (code, out) == (0, "converges to 1\n")
    code, out, _ = run(capsys, "lim", "n^2")
    assert (code, out) == (0, "diverges to +infinity\n")
    code, out, _ = run(capsys, "lim", "sin(n)", "--mode", "float")
    assert code == 0
    assert out.startswith("indeterminate")


def test_limfun(capsys):
    code, out, _ = run(capsys, "limfun", "(x^2 - 1)/(x - 1)", "--at", "1")
    assert (code, out) == (0, "limit 2\n")


def test_ucheck(capsys):
    code, out, _ = run(capsys, "ucheck", "x^2")
    assert code == 0
    assert out.splitlines()[0] == "fail"
    assert "witness: x = H, y = H + H^-1" in out
    code, out, _ = run(capsys, "ucheck", "3*x + 1")
    assert code == 0
    assert out.splitlines()[0] == "pass_all_probes"


def test_evt(capsys):
    code, out, _ = run(
        capsys, "evt", "x*(1-x)", "--grid", "8", "--doublings", "2"
    )
    assert code == 0
    assert "argmax 1/2" in out
    assert out.rstrip().endswith("argmax stabilized")


def test_newton_final_display(capsys):
    code, out, _ = run(
        capsys, "newton", "log(x)", "--x0", "1/2", "--steps", "8",
        "--display", "6",
    )
    assert code == 0
    assert out.rstrip().endswith("final display: 0.999999")
    assert " 0  0.500000" in out


def test_newton_check(capsys):
    code, out, _ = run(
        capsys, "newton", "x - 1", "--x0", "1/2", "--steps", "3", "--check"
    )
    assert code == 0
    assert "boundary cases:" in out


def test_exit_code_math_error(capsys):
    code, out, err = run(capsys, "eval", "floor(H/3)")
    assert code == 1
    assert out == ""
    assert "error:" in err


def test_exit_code_syntax(capsys):
    code, _, err = run(capsys, "eval", "1 +")
    assert code == 2
    assert "error:" in err


def test_exit_code_usage(capsys):
    code, _, err = run(capsys, "frobnicate", "1")
    assert code == 2


def test_json_envelope(capsys):
    code, out, _ = run(capsys, "eval", "nines(H)", "--json", "--lightstone")
    assert code == 0
    payload = json.loads(out)
    assert payload == {
        "ok": True,
        "value": "1 - eps",
        "lightstone": ".999…;…9̂",
        "flags": {"truncated": False},
    }


def test_json_truncated_flag(capsys):
    code, out, _ = run(capsys, "eval", "1/(1 + eps)", "--json")
    payload = json.loads(out)
    assert payload["flags"]["truncated"] is True


def test_json_error_envelope(capsys):
    code, out, _ = run(capsys, "eval", "floor(H/3)", "--json")
    assert code == 1
    payload = json.loads(out)
    assert payload["ok"] is False
    assert payload["error"]["type"] == "FloorUndecidable"


def test_context_flags(capsys):
    code, out, _ = run(
        capsys, "st", "exp(1) + eps", "--mode", "float", "--prec", "20"
    )
    assert code == 0
    assert out.startswith("2.718281828459045")


def test_microscope_preset_matches_golden(capsys):
    code, out, _ = run(
        capsys, "microscope", "--preset", "triple", "--format", "ascii"
    )
    assert code == 0
    want = (GOLDEN / "triple.txt").read_text(encoding="utf-8")
    assert out == want


def test_microscope_custom_scene(capsys):
    code, out, _ = run(
        capsys, "microscope",
        "--center", "1", "--scale", "eps",
        "--point", "below=1 - 2*eps", "--point", "above=1 + eps",
        "--format", "ascii",
    )
    assert code == 0
    assert "* below" in out
    assert "* above" in out


def test_microscope_out_file(tmp_path, capsys):
    target = tmp_path / "scene.svg"
    code, out, _ = run(
        capsys, "microscope", "--preset", "slope", "--out", str(target)
    )
    assert code == 0
    want = (GOLDEN / "slope.svg").read_text(encoding="utf-8")
    assert target.read_text(encoding="utf-8") == want


def test_microscope_needs_scene(capsys):
    code, _, err = run(capsys, "microscope", "--format", "ascii")
    assert code == 2


def test_repl(capsys, monkeypatch):
    feed = iter(["1 - eps", "st(nines(H))", "floor(H/3)", ":q"])
    monkeypatch.setattr(
        "builtins.input", lambda prompt="": next(feed)
    )
    code = run_cli(["repl"])
    out, err = capsys.readouterr().out, capsys.readouterr().err
    assert code == 0
    assert "1 - eps" in out
    assert "1" in out


def test_cli_determinism(capsys):
    a = run(capsys, "microscope", "--preset", "slope", "--format", "svg")
    b = run(capsys, "microscope", "--preset", "slope", "--format", "svg")
    assert a == b
