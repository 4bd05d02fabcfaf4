import io
import json
import subprocess
import sys
from importlib import resources

import pytest

from bcontinuum.cli import CONFIG_ENV, EXIT_OK, EXIT_USAGE, run

jsonschema = pytest.importorskip("jsonschema")

SCHEMA = json.loads(resources.files("bcontinuum").joinpath("schema/output.schema.json").read_text())

INVOCATIONS = {
    "order": ["order", "--expr", "exp(-1/i)"],
    "order_nonregular": ["order", "--expr", "i*(2+sin(1/i))"],
    "st": ["st", "--lc", "3 + 2*eps - eps^2"],
    "deriv": ["deriv", "--expr", "sin(x)*exp(x)", "--at", "1/2"],
    "deriv_nondiff": ["deriv", "--expr", "abs(x)", "--at", "0"],
    "microcont": ["microcont", "--expr", "sin(1/x)", "--probe", "boundary:0+", "--domain", "(0,1)"],
    "microcont_std": ["microcont", "--expr", "x^2", "--probe", "standard:1"],
    "uniform": ["uniform", "--expr", "x^2", "--domain", "(-inf,inf)"],
    "uniform_ok": ["uniform", "--expr", "x^2", "--domain", "[0,1]", "--grid", "5"],
    "sumthm": ["sumthm", "--term", "1/k - 1/(k+1)", "--xseq", "1/n"],
    "euler": ["euler", "--v", "1", "--kmax", "4", "--horizon", "1000"],
    "compare": ["compare", "--lhs", "n^(1/10)", "--rhs", "log(n)^3"],
    "compare_unknown": ["compare", "--lhs", "(-1)^n/n", "--rhs", "0"],
    "limit": ["limit", "--germ", "(n+1)/n"],
}


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(INVOCATIONS))
def test_json_validates(name):
    code, out, _ = call(INVOCATIONS[name] + ["--json"])
    assert code == EXIT_OK
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["command"] == INVOCATIONS[name][0]


@pytest.mark.parametrize("name", ["order", "compare", "microcont", "sumthm", "euler"])
def test_output_is_deterministic(name):
    a = call(INVOCATIONS[name] + ["--json"])[1]
    b = call(INVOCATIONS[name] + ["--json"])[1]
    assert a == b
    assert call(INVOCATIONS[name])[1] == call(INVOCATIONS[name])[1]


def _text_fields(text):
    fields = {}
    for line in text.splitlines():
        if ": " in line and not line.startswith(" "):
            k, v = line.split(": ", 1)
            fields[k] = v
    return fields


@pytest.mark.parametrize("name,keys", [
    ("order", ["order", "grade", "regular"]),
    ("compare", ["ordering", "grade"]),
    ("microcont", ["status", "grade", "certificate"]),
    ("uniform", ["status"]),
    ("sumthm", ["verdict1821", "verdict1853"]),
    ("limit", ["limit", "grade"]),
])
def test_text_and_json_agree(name, keys):
    doc = json.loads(call(INVOCATIONS[name] + ["--json"])[1])
    text = _text_fields(call(INVOCATIONS[name])[1])
    for k in keys:
        v = doc[k]
        shown = "-" if v is None else (str(v).lower() if isinstance(v, bool) else str(v))
        assert text[k] == shown, k


def test_examples_through_cli():
    doc = json.loads(call(INVOCATIONS["order"] + ["--json"])[1])
    assert doc["order"] == "infinity" and doc["grade"] == "symbolic"
    doc = json.loads(call(INVOCATIONS["compare"] + ["--json"])[1])
    assert doc["ordering"] == "greater" and doc["grade"] == "symbolic"
    doc = json.loads(call(INVOCATIONS["compare_unknown"] + ["--json"])[1])
    assert doc["ordering"] == "unknown"
    doc = json.loads(call(INVOCATIONS["deriv_nondiff"] + ["--json"])[1])
    assert doc["status"] == "non_differentiable"


@pytest.mark.parametrize("argv", [
    ["order"],
    ["order", "--expr", "2*+3"],
    ["deriv", "--expr", "x^2", "--at", "1", "--trunc", "0"],
    ["nosuch"],
    ["microcont", "--expr", "x", "--probe", "sideways"],
    ["euler", "--v", "1", "--kmax", "8", "--horizon", "10"],
])
def test_usage_errors(argv):
    code, out, err = call(argv)
    assert code == EXIT_USAGE
    assert out == "" and err


def test_parse_error_reports_offset():
    code, _, err = call(["order", "--expr", "sin(i"])
    assert code == EXIT_USAGE and "5" in err


def test_domain_error_exit_code():
    code, _, err = call(["deriv", "--expr", "log(x)", "--at", "-1"])
    assert code == 3 and err


def test_config_file_via_env(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trunc": 5, "precision": 10}))
    monkeypatch.setenv(CONFIG_ENV, str(cfg))
    doc = json.loads(call(INVOCATIONS["deriv"] + ["--json"])[1])
    assert doc["config"]["trunc"] == "5" and doc["config"]["precision"] == "10"
    # command-line flags win over the file
    doc = json.loads(call(INVOCATIONS["deriv"] + ["--json", "--trunc", "7"])[1])
    assert doc["config"]["trunc"] == "7"


def test_bad_config_is_usage_error(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "blue"}))
    assert call(["limit", "--germ", "1/n", "--config", str(cfg)])[0] == EXIT_USAGE


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bcontinuum.cli", "limit", "--germ", "1/n", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["limit"] == "0"
