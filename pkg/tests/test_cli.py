from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from parcohom import __version__
from parcohom.cli import main
from parcohom.datasets import ENV_VAR

from test_jobs import FAMILY1


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def job_file(tmp_path):
    def write(job, name="job.json"):
        path = tmp_path / name
        path.write_text(job if isinstance(job, str) else json.dumps(job))
        return str(path)
    return write


def test_version(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0 and __version__ in result.output


def test_run_json_is_canonical_and_repeatable(runner, job_file, tmp_path):
    path = job_file(FAMILY1)
    out = tmp_path / "report.json"
    first = runner.invoke(main, ["run", path, "-o", str(out)])
    second = runner.invoke(main, ["run", path])
    assert first.exit_code == 0
    assert first.stdout == second.stdout == out.read_text()
    report = json.loads(first.stdout)
    assert report["result"]["W"]["det"] == "3"
    assert report["version"] == __version__


def test_run_table_format(runner, job_file):
    result = runner.invoke(main, ["run", job_file({**FAMILY1, "options": {"format": "table"}})])
    assert result.exit_code == 0
    assert "W.det" in result.stdout and "3" in result.stdout


def test_mismatch_exits_2(runner, job_file):
    result = runner.invoke(main, ["run", job_file({**FAMILY1, "expected": {"W.det": 5}}), "--format", "table"])
    assert result.exit_code == 2
    assert "FAIL" in result.stdout


def test_malformed_braid_exits_64_with_location(runner, job_file):
    job = {**FAMILY1, "payload": {**FAMILY1["payload"], "braids": ["b2^2", "b2 b1", "b1"]}}
    result = runner.invoke(main, ["run", job_file(job), "--format", "table"])
    assert result.exit_code == 64
    assert result.stdout == ""
    assert "payload/braids/1" in result.stderr


@pytest.mark.parametrize("content", ["{not json", json.dumps({**FAMILY1, "bogus": True}), "[]"])
def test_bad_input_exits_64(runner, job_file, content):
    assert runner.invoke(main, ["run", job_file(content)]).exit_code == 64


def test_missing_file_exits_64(runner, tmp_path):
    result = runner.invoke(main, ["run", str(tmp_path / "absent.json")])
    assert result.exit_code == 64 and "cannot read" in result.stderr


def test_computation_error_exits_1(runner, job_file):
    job = {"kind": "mc", "payload": {"tuple": {"mats": [[[2, 1], [1, 1]], [[1, -1], [-1, 2]]]}}}
    result = runner.invoke(main, ["run", job_file(job)])
    assert result.exit_code == 1
    assert "computation" in json.loads(result.stdout)["error"]


def test_kodaira_command(runner):
    result = runner.invoke(main, ["kodaira", "--orders", "1,2,3"])
    assert result.exit_code == 0 and "III" in result.stdout
    result = runner.invoke(main, ["kodaira", "--orders", "0,0,5", "--format", "json"])
    assert json.loads(result.stdout)["result"]["monodromy"] == [["1", "5"], ["0", "1"]]
    bad = runner.invoke(main, ["kodaira", "--orders", "4,6,12"])
    assert bad.exit_code == 64 and bad.stdout == "" and bad.stderr.count("error") == 1
    assert runner.invoke(main, ["kodaira", "--orders", "a,b"]).exit_code == 64


def test_fixtures_filter_and_empty(runner):
    result = runner.invoke(main, ["fixtures", "--filter", "kodaira-I[0-9]*"])
    assert result.exit_code == 0 and "4/4 passed" in result.stdout
    empty = runner.invoke(main, ["fixtures", "--filter", "nothing-*", "--format", "json"])
    assert empty.exit_code == 0
    assert json.loads(empty.stdout)["counts"] == {"failed": "0", "passed": "0", "total": "0"}


def test_fixtures_env_override(runner, tmp_path):
    data = {"printed": [], "cases": [{"id": "x", "citation": "Kodaira table, II row",
                                      "job": {"kind": "kodaira", "payload": {"orders": [1, 1, 2]}},
                                      "expected": {"type": "IV"}}]}
    path = tmp_path / "d.json"
    path.write_text(json.dumps(data))
    result = runner.invoke(main, ["fixtures"], env={ENV_VAR: str(path)})
    assert result.exit_code == 2 and "FAIL" in result.stdout
