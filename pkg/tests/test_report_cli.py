"""Config ingestion, report emission and the command line."""
import json
import shutil
import subprocess
import sys

import pytest

from dirac_bergmann.pipeline.fixtures import Fixture
from dirac_bergmann.report import (ConfigError, emit_report, load_config, parse_config, parse_report,
                                   run_analysis, verify_identity)
from dirac_bergmann.report.cli import main
from dirac_bergmann.report.config import SEED_ENV, bundled_configs
from dirac_bergmann.report.emit import ReportFormatError
from dirac_bergmann.report.latex import escape, expr_latex
from dirac_bergmann.tensor.parser import parse_expr
from dirac_bergmann.tensor.symbols import palatini_symbols

from conftest import analysis

MINIMAL = """
[theory]
name = palatini
samples = 8
[fixtures]
set = none
"""


def write(tmp_path, text, name="cfg.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# -- configs -----------------------------------------------------------

def test_bundled_configs_load():
    names = bundled_configs()
    assert {"palatini-so21", "palatini-euclidean", "palatini-lambda-zero", "adjoint-so21", "adjoint-so3"} <= set(names)
    for n in names:
        assert load_config(n).build_theory().name


@pytest.mark.parametrize("text, message", [
    ("[theory]\nlam_mode = sometimes\n", "lam_mode"),
    ("[theory]\nseed = abc\n", "theory"),
    ("[fixtures]\nset = everything\n", "fixture set"),
    ("[fixtures]\nfamilies = guessed\n", "families"),
    ("[fields]\ne = Pe sym\n", "field declaration"),
    ("[backend]\nname = generic\neta = 1 1\n", "eta"),
    ("[theory\nname = x\n", None),
])
def test_config_errors(text, message):
    with pytest.raises(ConfigError, match=message):
        parse_config(text)


def test_seed_environment_override(monkeypatch):
    assert parse_config(MINIMAL).seed == 20240601
    monkeypatch.setenv(SEED_ENV, "17")
    assert parse_config(MINIMAL).seed == 17
    monkeypatch.setenv(SEED_ENV, "seventeen")
    with pytest.raises(ConfigError, match=SEED_ENV):
        parse_config(MINIMAL)


def test_generic_backend_from_config():
    cfg = parse_config(MINIMAL + "[backend]\nname = generic\neta = -1 1 1\n")
    b = cfg.build_backend()
    assert b.identity_enabled and b.eps_up[0, 1, 2] == 1


# -- reports -----------------------------------------------------------

def test_json_round_trip_is_byte_identical():
    text = emit_report(analysis("palatini-lambda-zero"), "json-like")
    assert emit_report(parse_report(text), "json-like") == text
    assert json.loads(text)["conventions"]


def test_reports_are_deterministic():
    cfg = load_config("palatini-lambda-zero")
    assert emit_report(run_analysis(cfg), "json-like") == emit_report(analysis("palatini-lambda-zero"), "json-like")


def test_report_rejects_garbage():
    with pytest.raises(ReportFormatError):
        parse_report("{not json")
    with pytest.raises(ReportFormatError):
        parse_report("{}")


def test_latex_report_has_dirac_table_and_fixture_table():
    tex = emit_report(analysis("palatini-so21"), "latex")
    assert tex.startswith("\\documentclass")
    assert "\\begin{align*}" in tex and "_D" in tex
    assert "\\begin{longtable}" in tex
    assert tex.count("\\begin{") == tex.count("\\end{")


def test_text_report_lists_every_fixture():
    rep = analysis("adjoint-so3")
    text = emit_report(rep, "text")
    for f in rep.fixtures:
        assert f["id"] in text


def test_latex_rendering_helpers():
    x = parse_expr("-1/2 Lam eps0[^a ^b] D_a(e[_b ^I])", palatini_symbols())
    out = expr_latex(x)
    assert out.startswith("-\\tfrac{1}{2}") and "\\Lambda" in out and "D_{" in out
    assert escape("a_b & 50%") == "a\\_b \\& 50\\%"


def test_residual_fixture_sets_exit_code_two():
    cfg = load_config("palatini-so21")
    bogus = Fixture("closure:bogus", "closure", ("gamI[_I]", "gamI[_J]", "eta[_I _J]"))
    rep = run_analysis(cfg, fixtures=[bogus])
    assert rep.fixture("closure:bogus")["verdict"] == "residual"
    assert rep.exit_code == 2


def test_verify_identity_verdicts():
    th = load_config("palatini-so21").build_theory()
    assert verify_identity(th, "0", "0") == "exact"
    assert verify_identity(th, "D_a(e[_b ^I])", "d_a(e[_b ^I]) + A[_a ^I _J] e[_b ^J]") == "exact"
    assert verify_identity(th, "e[_a ^I]", "2 e[_a ^I]") == "failed"


# -- command line --------------------------------------------------------

def test_cli_analyze_and_report(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["analyze", "palatini-lambda-zero", "--format", "latex", "--out", str(out)]) == 0
    assert (out / "results.json").exists() and (out / "results.tex").exists()
    capsys.readouterr()
    assert main(["report", str(out / "results.json"), "--format", "json-like"]) == 0
    assert capsys.readouterr().out == (out / "results.json").read_text()


def test_cli_empty_fixture_set(tmp_path, capsys):
    assert main(["analyze", write(tmp_path, MINIMAL), "--format", "json-like"]) == 0
    assert json.loads(capsys.readouterr().out)["fixtures"] == []


@pytest.mark.parametrize("argv", [
    ["analyze", "no/such/config.ini"],
    ["report", "no/such/results.json"],
    ["eval", "palatini-so21", "e[_a ^I"],
])
def test_cli_input_errors_exit_three(argv, capsys):
    assert main(argv) == 3
    assert "error:" in capsys.readouterr().err


def test_cli_bad_results_file(tmp_path):
    assert main(["report", write(tmp_path, "[1, 2]", "r.json")]) == 3


def test_cli_verify(capsys):
    assert main(["verify", "palatini-so21", "{gamIJ[_I _J], gamI[_K]}",
                 "eta[_J _K] gamI[_I] - eta[_I _K] gamI[_J]"]) in (0, 2)
    capsys.readouterr()
    assert main(["verify", "palatini-so21", "0", "0"]) == 0
    assert capsys.readouterr().out.strip() == "exact"
    assert main(["verify", "palatini-so21", "Pe[^a _I]", "PA[^a _I _J] e[_0 ^J]"]) == 2


def test_cli_eval_is_reproducible(capsys):
    assert main(["eval", "palatini-so21", "Pe[^a _I] e[_a ^I]", "--point", "5"]) == 0
    first = capsys.readouterr().out
    main(["eval", "palatini-so21", "Pe[^a _I] e[_a ^I]", "--point", "5"])
    assert capsys.readouterr().out == first
    assert first.startswith("value: ")


def test_console_script_is_installed():
    exe = shutil.which("dirac-bergmann")
    if exe is None:
        pytest.skip("package not installed with its console script")
    res = subprocess.run([exe, "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "analyze" in res.stdout


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dirac_bergmann.report.cli", "verify", "palatini-so21", "0", "0"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "exact"
