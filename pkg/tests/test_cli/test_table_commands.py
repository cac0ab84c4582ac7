"""Tests for the table, graph and chart commands."""
import json

from serene.cli.main import cli


def test_help(cli_runner):
    """Test the group lists every command."""
    result = cli_runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    for name in ("validate", "simplicize", "ncgraph", "complete-free", "probe"):
        assert name in result.output


def test_example_round_trip(cli_runner, tmp_path):
    """Test writing a builtin table and validating the file."""
    path = tmp_path / "q8.json"
    result = cli_runner.invoke(cli, ["example", "q8", "--out", str(path)])
    assert result.exit_code == 0
    assert path.exists()

    result = cli_runner.invoke(cli, ["validate", str(path)])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["latin"] and payload["alternating"]
    assert payload["nct_size"] == 24
    assert not payload["commutative"]


def test_example_listing(cli_runner):
    """Test the builtin names are listed without an argument."""
    result = cli_runner.invoke(cli, ["example"])
    assert result.exit_code == 0
    assert "q8" in result.output.split()


def test_example_text_grid(cli_runner):
    """Test the Cayley grid of a small table."""
    result = cli_runner.invoke(cli, ["example", "z3", "--format", "text"])
    assert result.exit_code == 0
    assert "*" in result.output


def test_validate_generate(cli_runner):
    """Test the generated subquasigroup of i and j."""
    result = cli_runner.invoke(cli, ["validate", "--example", "q8", "-g", "i,j"])
    assert result.exit_code == 0
    assert len(json.loads(result.output)["generated"]) == 8


def test_validate_sources(cli_runner, tmp_path):
    """Test missing files and conflicting sources are usage errors."""
    result = cli_runner.invoke(cli, ["validate", str(tmp_path / "missing.json")])
    assert result.exit_code == 2

    result = cli_runner.invoke(cli, ["validate"])
    assert result.exit_code == 2
    assert "exactly one" in result.output


def test_unknown_example(cli_runner):
    """Test domain errors exit with status 1."""
    result = cli_runner.invoke(cli, ["validate", "--example", "octonions"])
    assert result.exit_code == 1
    assert "Error:" in result.output
    assert "Unknown example" in result.output


def test_bad_table_file(cli_runner, tmp_path):
    """Test a malformed table file is reported."""
    path = tmp_path / "bad.json"
    path.write_text('{"arity": 2, "order": 2, "values": [0, 1, 1]}')
    result = cli_runner.invoke(cli, ["validate", str(path)])
    assert result.exit_code == 1
    assert "Error:" in result.output
    assert "Invalid OperationTable" in result.output


def test_simplicize(cli_runner):
    """Test the facet table of Q8 in both formats."""
    result = cli_runner.invoke(cli, ["simplicize", "--example", "q8"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["dim"] == 2
    assert len(payload["facets"]) == 24
    assert "in:i" in payload["vertices"]

    result = cli_runner.invoke(cli, ["simplicize", "-e", "q8", "--format", "text"])
    assert result.exit_code == 0
    assert "24 facets on 12 vertices" in result.output


def test_ncgraph(cli_runner):
    """Test graph invariants and the DOT output."""
    result = cli_runner.invoke(cli, ["ncgraph", "--example", "a6"])
    assert result.exit_code == 0
    assert json.loads(result.output)["hypercube_dim"] == 4

    result = cli_runner.invoke(cli, ["ncgraph", "--example", "a6", "--dot"])
    assert result.exit_code == 0
    assert result.output.startswith('graph "a6" {')
    assert result.output.count("[label=") == 16
    assert result.output.count(" -- ") == 32


def test_ncgraph_adjacency_to_file(cli_runner, tmp_path):
    """Test --out writes the adjacency JSON."""
    path = tmp_path / "q8-graph.json"
    result = cli_runner.invoke(
        cli, ["ncgraph", "-e", "q8", "--adjacency", "--out", str(path)]
    )
    assert result.exit_code == 0
    assert len(json.loads(path.read_text())["vertices"]) == 24


def test_invariants(cli_runner):
    """Test the cone apex is reported as singular."""
    result = cli_runner.invoke(cli, ["invariants", "--fixture", "cone-torus"])
    assert result.exit_code == 0
    summary = json.loads(result.output)["components"][0]
    assert summary["link_flags"]["9"] == "non_sphere_like"
    assert not summary["pseudomanifold"]

    result = cli_runner.invoke(
        cli, ["invariants", "--example", "q8", "--format", "text"]
    )
    assert result.exit_code == 0
    assert "sphere-like" in result.output


def test_chart_exact(cli_runner):
    """Test exact coefficients of the Q8 input chart."""
    result = cli_runner.invoke(
        cli,
        ["chart", "-e", "q8", "--tuple", "i,j", "--u", "1/5,3/10", "--exact"],
    )
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["branch"] == "below"
    assert payload["coefficients"] == {"in:i": "1/5", "in:j": "3/10", "out:k": "1/2"}
    assert payload["total"] == "1"


def test_chart_output_above(cli_runner):
    """Test the output chart above the ridge."""
    result = cli_runner.invoke(
        cli,
        ["chart", "-e", "q8", "--tuple", "i,j", "--type", "out", "--u", "0.6,0.6"],
    )
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["branch"] == "above"
    assert set(payload["coefficients"]) == {"in:i", "out:k", "in:-j"}


def test_chart_outside_domain(cli_runner):
    """Test coordinates outside the bipyramid."""
    result = cli_runner.invoke(
        cli, ["chart", "-e", "q8", "--tuple", "i,j", "--u", "1.5,0.1"]
    )
    assert result.exit_code == 1
    assert "bipyramid" in result.output


def test_seed_only_on_randomized_commands(cli_runner):
    """Test deterministic commands refuse --seed."""
    for args in (
        ["validate", "-e", "q8"],
        ["simplicize", "-e", "q8"],
        ["chart", "-e", "q8", "--tuple", "i,j", "--u", "0.2,0.3"],
    ):
        result = cli_runner.invoke(cli, args + ["--seed", "1"])
        assert result.exit_code == 2
        assert "--seed" in result.output
