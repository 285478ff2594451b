import csv
import io
import json
import math
import subprocess
import sys

import pytest

from spinc_bergman.cli import run
from spinc_bergman.config import CONFIG_ENV, ConfigError, load_config, parse_config_text
from spinc_bergman.identities import IdentityRuleSet
from spinc_bergman.report import FAIL, PASS, CheckRecord, ReportDocument


# --- config ---------------------------------------------------------------

def test_parse_config_text():
    vals = parse_config_text("# comment\nn = 2\na = 2pi, -6pi  # mixed\nflat = yes\n\nflux = 1,3\n")
    assert vals["n"] == 2
    assert vals["a"] == pytest.approx((2 * math.pi, -6 * math.pi))
    assert vals["flat"] is True
    assert vals["flux"] == (1, 3)


@pytest.mark.parametrize("text", ["bogus = 1", "n 2", "n = two", "flat = maybe"])
def test_bad_config_lines(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


@pytest.mark.parametrize("over", [{"n": 0}, {"a": "2pi", "n": 2}, {"a": "0"}, {"tol": -1.0},
                                  {"flux": "0"}])
def test_config_validation(over):
    with pytest.raises(ConfigError):
        load_config(None, over)


def test_precedence(tmp_path, monkeypatch):
    f = tmp_path / "run.cfg"
    f.write_text("cutoff = 12\nseed = 5\n")
    monkeypatch.setenv(CONFIG_ENV, str(f))
    cfg = load_config(None, {"seed": 9})
    assert (cfg.cutoff, cfg.seed) == (12, 9)
    assert load_config(None, {"a": "2pi,-2pi"}).n == 2


# --- report ---------------------------------------------------------------

def test_report_serialisation():
    recs = [CheckRecord("x", "ref-x", "q", PASS, 1.0, 1.0 + 1e-15, 1e-6, "a=1"),
            CheckRecord("y", "ref-y", "q", FAIL, 0.1, 0.3, 1e-6, "")]
    doc = ReportDocument("demo", {"n": 1}, recs, "h")
    data = json.loads(doc.to_json())
    assert list(data) == ["schema_version", "tool_version", "command", "config", "ruleset_hash",
                          "status", "checks"]
    assert data["status"] == FAIL and doc.exit_code == 1
    rows = list(csv.reader(io.StringIO(doc.to_csv())))
    assert rows[0] == ["check-name", "parameter-string", "measured", "expected", "tolerance", "pass"]
    assert [r[-1] for r in rows[1:]] == ["true", "false"]


# --- commands -------------------------------------------------------------

def test_model_spectrum_json_deterministic(tmp_path, capsys):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert run(["model-spectrum", "--cutoff", "20", "--json-out", str(path), "--quiet"]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    data = json.loads(outs[0])
    assert data["status"] == PASS
    assert all(c["paper_ref"] and c["quote"] for c in data["checks"])


def test_model_kernels_csv(tmp_path):
    path = tmp_path / "k.csv"
    assert run(["model-kernels", "--a", "-2pi", "--csv-out", str(path), "--quiet"]) == 0
    rows = list(csv.reader(path.open()))
    assert rows[0][0] == "check-name" and all(r[-1] == "true" for r in rows[1:])


def test_torus_gap_command(capsys):
    assert run(["torus-gap", "--flux", "1,2"]) == 0
    assert "torus-gap: PASS" in capsys.readouterr().out


def test_torus_resolution_failure(capsys):
    assert run(["torus-gap", "--flux", "9", "--grid", "16"]) == 1


def test_oracle_command():
    assert run(["oracle", "--quiet"]) == 0


def test_check_identities_command(tmp_path):
    path = tmp_path / "id.json"
    assert run(["check-identities", "--jets", "2", "--json-out", str(path), "--quiet"]) == 0
    data = json.loads(path.read_text())
    assert data["ruleset_hash"] == IdentityRuleSet.load().hash()


def test_symbolic_b1_reports_misprint(tmp_path, capsys):
    path = tmp_path / "b1.json"
    ledger = tmp_path / "ledger.txt"
    code = run(["symbolic-b1", "--flat", "--json-out", str(path), "--ledger-out", str(ledger)])
    err = capsys.readouterr().err
    data = json.loads(path.read_text())
    failing = [c["name"] for c in data["checks"] if c["status"] != PASS]
    assert code == 1 and failing == ["adjoint_right"]
    assert "first failing step: adjoint_right" in err
    assert ledger.read_text().strip()


def test_corrupted_rules_fail_at_dependent_step(tmp_path, capsys):
    text = IdentityRuleSet.load().serialize()
    good = "(1,0) * NABLA2J(q~,p,r~,s~) + (0,-2) * RTX(p,q~,r~,s~)"
    bad = tmp_path / "bad.txt"
    bad.write_text(text.replace(good, good.replace("(0,-2)", "(0,2)")))
    path = tmp_path / "b1.json"
    assert run(["symbolic-b1", "--rules", str(bad), "--json-out", str(path), "--quiet"]) == 1
    data = json.loads(path.read_text())
    failing = [c["name"] for c in data["checks"] if c["status"] != PASS]
    assert "q2_origin_commutator_form" in failing and "b1" in failing
    assert data["ruleset_hash"] != IdentityRuleSet.load().hash()


def test_config_error_exit_code(tmp_path):
    f = tmp_path / "bad.cfg"
    f.write_text("nonsense = 1\n")
    assert run(["model-spectrum", "--config", str(f)]) == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "spinc_bergman.cli", "--version"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip()
