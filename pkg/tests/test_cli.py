"""End-to-end CLI runs: golden byte comparisons, schema validation,
thread-count invariance, exit codes, and file output."""

import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

HERE = Path(__file__).resolve().parent
GOLDEN = HERE / "golden"
SCHEMAS = HERE.parents[0] / "src" / "ctlab" / "schemas"

# golden file -> (schema stem or None, CLI argument list)
CASES = {
    "spectrum_maj3.json": ("spectrum", ["spectrum", "--fn", "majority:3", "--p", "1/2", "--format", "json"]),
    "influence_maj3.json": ("influence", ["influence", "--fn", "majority:3", "--p", "1/3", "--format", "json"]),
    "curve_or2.csv": (None, ["threshold-curve", "--fn", "or:2", "--grid", "1/3,1/2,2/3"]),
    "curve_or2.json": ("threshold_curve", ["threshold-curve", "--fn", "or:2", "--grid", "1/3,1/2,2/3", "--format", "json"]),
    "critical_tribes22.json": ("critical_p", ["critical-p", "--fn", "tribes:2,2", "--format", "json"]),
    "russo_and2.json": ("russo_check", ["russo-check", "--fn", "and:2", "--p", "2/5", "--format", "json"]),
    "lhs_maj3.json": ("theorem_report", ["bourgain-lhs", "--fn", "majority:3", "--p", "1/2", "--B", "1", "--format", "json"]),
    "witness_or3.json": ("witness_prob", ["witness-prob", "--fn", "or:3", "--p", "1/4", "--B", "2", "--format", "json"]),
    "booster_and2.json": ("booster_search", ["booster-search", "--fn", "and:2", "--p", "1/3", "--B", "2", "--format", "json"]),
    "corollary_or4.json": ("corollary_report", ["corollary-check", "--fn", "or:4", "--p", "1/10", "--format", "json"]),
    "diag_maj3.json": ("diagnostics_report", ["proof-diagnostics", "--fn", "majority:3", "--p", "1/2", "--B", "3", "--epsilon", "1/4", "--M", "4", "--format", "json"]),
    "mc_or16.json": ("mc_estimate", ["mc-estimate", "--fn", "or:16", "--p", "1/8", "--stat", "expectation", "--samples", "2000", "--seed", "11", "--format", "json"]),
    "catalog.json": ("catalog_list", ["catalog-list", "--format", "json"]),
}


def run_cli(*args: str, env_extra=None, expect: int = 0) -> subprocess.CompletedProcess:
    env = os.environ.copy()
    env.pop("CTL_THREADS", None)
    if env_extra:
        env.update(env_extra)
    proc = subprocess.run(
        [sys.executable, "-m", "ctlab.cli", *args],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == expect, (proc.returncode, proc.stderr)
    return proc


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_byte_identical(name):
    _, args = CASES[name]
    proc = run_cli(*args)
    assert proc.stdout == (GOLDEN / name).read_text(), name


@pytest.mark.parametrize("name", sorted(k for k, v in CASES.items() if v[0]))
def test_output_matches_schema(name):
    stem, args = CASES[name]
    payload = json.loads(run_cli(*args).stdout)
    schema = json.loads((SCHEMAS / f"{stem}.schema.json").read_text())
    jsonschema.Draft202012Validator(schema).validate(payload)


MC_ARGS = CASES["mc_or16.json"][1]


def test_mc_invariant_under_thread_count():
    base = run_cli(*MC_ARGS).stdout
    assert run_cli(*MC_ARGS, "--threads", "1").stdout == base
    assert run_cli(*MC_ARGS, "--threads", "8").stdout == base
    assert run_cli(*MC_ARGS, env_extra={"CTL_THREADS": "5"}).stdout == base


def test_mc_rerun_byte_identical():
    assert run_cli(*MC_ARGS).stdout == run_cli(*MC_ARGS).stdout


def test_reference_backend_same_bytes():
    for name in ("spectrum_maj3.json", "mc_or16.json", "diag_maj3.json"):
        _, args = CASES[name]
        forced = run_cli(*args, env_extra={"CTLAB_FORCE_REFERENCE": "1"})
        assert forced.stdout == (GOLDEN / name).read_text(), name


def test_out_writes_file(tmp_path):
    target = tmp_path / "report.json"
    proc = run_cli("influence", "--fn", "majority:3", "--p", "1/3",
                   "--format", "json", "--out", str(target))
    assert proc.stdout == ""
    written = json.loads(target.read_text())
    golden = json.loads((GOLDEN / "influence_maj3.json").read_text())
    assert written["config"].pop("out") == str(target)
    assert golden["config"].pop("out") == "-"
    assert written == golden


def test_decimal_p_flagged_inexact():
    payload = json.loads(run_cli(
        "influence", "--fn", "or:2", "--p", "0.3", "--format", "json").stdout)
    assert payload["config"]["p_inexact"] is True
    assert payload["config"]["p_input"] == "0.3"
    assert payload["config"]["p"] == "3/10"


def test_exact_decimal_still_inexact_flagged_false_for_fraction():
    payload = json.loads(run_cli(
        "influence", "--fn", "or:2", "--p", "3/10", "--format", "json").stdout)
    assert payload["config"]["p_inexact"] is False


def test_usage_errors_exit_2():
    run_cli("influence", "--fn", "nosuch:3", "--p", "1/2", expect=2)
    run_cli("influence", "--fn", "or:2", "--p", "7/5", expect=2)
    run_cli("influence", "--fn", "or:2", "--p", "0", expect=2)
    run_cli("spectrum", "--fn", "or:2", "--p", "1/2", "--format", "csv", expect=2)
    run_cli("mc-estimate", "--fn", "or:2", "--p", "1/2", "--stat", "influence",
            "--samples", "200", expect=2)  # --coord missing
    run_cli("no-such-command", expect=2)


def test_domain_errors_exit_3():
    run_cli("critical-p", "--fn", "parity:2", expect=3)
    run_cli("proof-diagnostics", "--fn", "or:2", "--p", "1/2", "--B", "1",
            "--epsilon", "5", "--M", "4", expect=3)


def test_error_message_on_stderr():
    proc = run_cli("influence", "--fn", "nosuch:3", "--p", "1/2", expect=2)
    assert proc.stdout == ""
    assert "nosuch" in proc.stderr


def test_influence_majority_rendered_values():
    payload = json.loads(run_cli(
        "influence", "--fn", "majority:3", "--p", "1/2", "--format", "json").stdout)
    per = payload["report"]["influences"]
    assert [c["exact"] for c in per] == ["1/2"] * 3
    assert payload["report"]["total"]["exact"] == "3/2"


def test_curve_dictator_and_constant(tmp_path):
    out = run_cli("threshold-curve", "--fn", "dictator:2",
                  "--grid", "1/4,1/2,3/4").stdout
    rows = [line.split(",") for line in out.splitlines()
            if line and not line.startswith("#")][1:]
    assert [r[1] for r in rows] == ["0.25", "0.5", "0.75"]
    assert [r[2] for r in rows] == ["1", "1", "1"]
    table = tmp_path / "never.bft"
    table.write_text("bft 1\n2\n0\n")
    out2 = run_cli("threshold-curve", "--fn", f"table:{table}",
                   "--grid", "1/4,1/2,3/4").stdout
    rows2 = [line.split(",") for line in out2.splitlines()
             if line and not line.startswith("#")][1:]
    assert [r[1] for r in rows2] == ["0", "0", "0"]
    assert all(r[4] == "0" for r in rows2)
