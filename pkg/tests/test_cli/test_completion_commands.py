"""Tests for the completion, probe and fixture commands."""
import json

import pytest

from serene.cli.main import cli


@pytest.fixture
def partial_file(tmp_path):
    path = tmp_path / "partial.json"
    entries = [[0, 0, 0], [1, 1, 1]]
    path.write_text(json.dumps({"arity": 2, "order": 2, "entries": entries}))
    return path


def test_fixture_listing(cli_runner):
    """Test the bundled names are listed."""
    result = cli_runner.invoke(cli, ["fixture"])
    assert result.exit_code == 0
    assert "torus7" in result.output.split()


def test_fixture_dump(cli_runner, tmp_path):
    """Test dumping an oriented fixture and reading it back."""
    path = tmp_path / "torus.json"
    result = cli_runner.invoke(
        cli, ["fixture", "torus7", "--oriented", "-o", str(path)]
    )
    assert result.exit_code == 0
    payload = json.loads(path.read_text())
    assert len(payload["orientation"]) == 14

    result = cli_runner.invoke(cli, ["complete-free", str(path), "--levels", "0"])
    assert result.exit_code == 0
    assert json.loads(result.output)["serenity"]["genus"] == 1


def test_fixture_not_orientable(cli_runner):
    """Test the Klein bottle cannot be oriented."""
    result = cli_runner.invoke(cli, ["fixture", "klein9", "--oriented"])
    assert result.exit_code == 1
    assert "not orientable" in result.output


def test_complete_free_torus(cli_runner):
    """Test one level of the torus completion."""
    result = cli_runner.invoke(cli, ["complete-free", "--fixture", "torus7"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert [level["elements"] for level in payload["levels"]] == [21, 1218]
    assert all(audit["ok"] for audit in payload["audits"])
    assert payload["capped"] is None
    assert payload["serenity"]["facet_count"] == 42


def test_complete_free_capped(cli_runner):
    """Test the 3-sphere stops at the cap and spot-checks instead."""
    result = cli_runner.invoke(
        cli,
        ["complete-free", "--fixture", "boundary-simplex-4", "--levels", "2",
         "--seed", "4"],
    )
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert len(payload["levels"]) == 2
    assert payload["capped"]["level"] == 2
    assert payload["spot_check"]["failures"] == []
    assert payload["serenity"]["facets_match"]


def test_complete_free_text(cli_runner):
    """Test the text summary."""
    result = cli_runner.invoke(
        cli, ["complete-free", "--fixture", "torus7", "--levels", "0", "-f", "text"]
    )
    assert result.exit_code == 0
    assert "serene" in result.output


def test_complete_free_needs_a_source(cli_runner):
    """Test the mesh source is required."""
    result = cli_runner.invoke(cli, ["complete-free"])
    assert result.exit_code == 2


def test_complete_latin(cli_runner, partial_file):
    """Test escalation from order 2 to order 3."""
    result = cli_runner.invoke(
        cli, ["complete-latin", str(partial_file), "--max-order", "3"]
    )
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["found"]
    assert [a["outcome"] for a in payload["attempts"]] == ["exhausted", "found"]
    assert payload["table"]["order"] == 3


def test_complete_latin_text(cli_runner, partial_file):
    """Test the text report of a failed and a successful search."""
    result = cli_runner.invoke(cli, ["complete-latin", str(partial_file), "-f", "text"])
    assert result.exit_code == 0
    assert "No completion found" in result.output

    result = cli_runner.invoke(
        cli,
        ["complete-latin", str(partial_file), "--max-order", "3", "--unreduced",
         "-f", "text"],
    )
    assert result.exit_code == 0
    assert "Found an order 3 completion" in result.output


def test_complete_latin_rejects_bad_partial(cli_runner, tmp_path):
    """Test a partial cube that is not partial Latin."""
    path = tmp_path / "bad.json"
    entries = [[0, 0, 0], [0, 1, 0]]
    path.write_text(json.dumps({"arity": 2, "order": 2, "entries": entries}))
    result = cli_runner.invoke(cli, ["complete-latin", str(path)])
    assert result.exit_code == 1
    assert "latin clause" in result.output


@pytest.mark.slow
def test_probe(cli_runner):
    """Test the probe on the 2-sphere."""
    result = cli_runner.invoke(cli, ["probe", "--fixture", "boundary-simplex-3"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["seed_entries"] == 12
    assert payload["completion"]["found"]


def test_complete_latin_accepts_seed(cli_runner, partial_file):
    """Test a seeded search gives the same table twice."""
    args = ["complete-latin", str(partial_file), "--max-order", "3", "--seed", "9"]
    first = cli_runner.invoke(cli, args)
    second = cli_runner.invoke(cli, args)
    assert first.exit_code == 0
    assert json.loads(first.output)["table"] == json.loads(second.output)["table"]
