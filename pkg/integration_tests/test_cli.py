"""Run the command line interface end to end, writing artifacts to files."""
import json

import pytest

from power_graph_variants.base import catalog
from power_graph_variants.main import (
    EXIT_CONFIG,
    EXIT_FAILED,
    EXIT_RESOURCE_CAP,
    main,
)


def _invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args])


@pytest.mark.integration
def test_build_integer_window_as_dot(runner, tmp_path):
    output = tmp_path / "integers.dot"
    result = _invoke(
        runner,
        "build",
        "--group",
        "integers",
        "--window",
        10,
        "--variant",
        "zpm",
        "--output",
        output,
    )
    assert result.exit_code == 0
    lines = output.read_text().splitlines()
    assert lines[0] == 'graph "integers-zpm" {'
    vertex_lines = [line for line in lines[1:-1] if "--" not in line]
    assert len(vertex_lines) == 21
    assert len(lines) - 2 - len(vertex_lines) == 78


@pytest.mark.integration
def test_build_from_table_as_json(runner, tmp_path, data_dir):
    output = tmp_path / "z4.json"
    result = _invoke(
        runner,
        "build",
        "--table",
        data_dir / "z4.json",
        "--format",
        "json",
        "--output",
        output,
    )
    assert result.exit_code == 0
    document = json.loads(output.read_text())
    assert document["vertices"] == ["0", "1", "2", "3"]
    assert len(document["edges"]) == 6
    assert document["directed"] is False


@pytest.mark.integration
def test_build_is_deterministic(runner, tmp_path):
    outputs = [tmp_path / "first.json", tmp_path / "second.json"]
    for output in outputs:
        result = _invoke(
            runner,
            "build",
            "--group",
            "rationals",
            "--window",
            3,
            "--variant",
            "nplus",
            "--directed",
            "--format",
            "json",
            "--output",
            output,
        )
        assert result.exit_code == 0
    assert outputs[0].read_bytes() == outputs[1].read_bytes()


@pytest.mark.integration
def test_build_report(runner, tmp_path):
    output = tmp_path / "report.json"
    result = _invoke(
        runner,
        "build",
        "--group",
        "heisenberg",
        "--window",
        1,
        "--variant",
        "zpm",
        "--format",
        "report",
        "--output",
        output,
    )
    assert result.exit_code == 0
    report = json.loads(output.read_text())
    assert report["group"] == "heisenberg"
    assert report["isolated"] == ["(0,0,0)"]


@pytest.mark.integration
@pytest.mark.parametrize(
    "args",
    (
        ["--group", "integers", "--window", 0],
        ["--group", "lattice", "--window", 3],
        ["--group", "heisenberg"],
        ["--group", "integers", "--heights", "default=1", "--window", 3],
        ["--heights", "4=1", "--window", 3],
        ["--table", "not_a_group.json"],
    ),
)
def test_build_configuration_errors(runner, tmp_path, data_dir, args):
    args = [data_dir / a if a == "not_a_group.json" else a for a in args]
    result = _invoke(runner, "build", *args, "--output", tmp_path / "out.dot")
    assert result.exit_code == EXIT_CONFIG
    assert not (tmp_path / "out.dot").exists()


@pytest.mark.integration
@pytest.mark.parametrize("name", ["missing.json", "truncated.json"])
def test_build_unreadable_table(runner, tmp_path, data_dir, name):
    result = _invoke(
        runner, "build", "--table", data_dir / name, "--output", tmp_path / "out.dot"
    )
    assert result.exit_code == EXIT_CONFIG
    assert "Invalid group description at 'table'" in result.output
    assert not (tmp_path / "out.dot").exists()


@pytest.mark.integration
def test_build_resource_cap(runner, tmp_path, monkeypatch):
    result = _invoke(
        runner, "build", "--group", "integers", "--window", 100, "--cap", 10
    )
    assert result.exit_code == EXIT_RESOURCE_CAP

    monkeypatch.setenv("POWERGRAPH_CAP", "10")
    result = _invoke(runner, "build", "--group", "integers", "--window", 100)
    assert result.exit_code == EXIT_RESOURCE_CAP


@pytest.mark.integration
def test_finite_groups_are_capped_first(runner, data_dir, monkeypatch):
    def no_table(n):
        raise AssertionError(f"table of order {n} was generated")

    monkeypatch.setattr(catalog, "cyclic_table", no_table)
    result = _invoke(runner, "build", "--group", "z5000", "--cap", 50)
    assert result.exit_code == EXIT_RESOURCE_CAP

    result = _invoke(runner, "build", "--table", data_dir / "z4.json", "--cap", 3)
    assert result.exit_code == EXIT_RESOURCE_CAP


@pytest.mark.integration
def test_failed_check_exits_with_a_report(runner, tmp_path):
    output = tmp_path / "phi.jsonl"
    result = _invoke(
        runner,
        "check",
        "phi",
        "--group",
        "integers",
        "--window",
        3,
        "--output",
        output,
    )
    assert result.exit_code == EXIT_FAILED
    (line,) = output.read_text().splitlines()
    report = json.loads(line)
    assert report["pass"] is False
    assert report["error"].startswith("UnsupportedFamily")


@pytest.mark.integration
def test_is_q_check_on_heights(runner, tmp_path):
    output = tmp_path / "is-q.jsonl"
    result = _invoke(
        runner, "check", "is-q", "--heights", "default=1", "--output", output
    )
    assert result.exit_code == 0
    report = json.loads(output.read_text())
    assert report["pass"] is True
    assert report["evidence"]["is_q"] is False
    assert report["evidence"]["witness_prime"] == 2


@pytest.mark.integration
def test_orientation_check(runner, tmp_path):
    output = tmp_path / "orientation.jsonl"
    result = _invoke(
        runner,
        "check",
        "orientation",
        "--group",
        "integers",
        "--window",
        30,
        "--output",
        output,
    )
    assert result.exit_code == 0
    report = json.loads(output.read_text())
    assert report["evidence"]["agreement_ratio"] == 1.0


@pytest.mark.integration
def test_check_respects_the_cap(runner, tmp_path):
    result = _invoke(
        runner,
        "check",
        "isolated",
        "--group",
        "integers",
        "--window",
        50,
        "--cap",
        20,
    )
    assert result.exit_code == EXIT_RESOURCE_CAP


@pytest.mark.integration
def test_quick_suite(runner, tmp_path):
    output = tmp_path / "suite.jsonl"
    summary = tmp_path / "summary.json"
    result = _invoke(
        runner,
        "suite",
        "--profile",
        "quick",
        "--output",
        output,
        "--json",
        summary,
    )
    assert result.exit_code == 0
    reports = [json.loads(line) for line in output.read_text().splitlines()]
    assert [r["check"] for r in reports] == sorted(r["check"] for r in reports)
    assert len(reports) == 12
    assert all(r["pass"] for r in reports)
    got = json.loads(summary.read_text())
    assert got["passed"] is True
    assert got["first_failure"] is None
