"""Main CLI entry point for serene."""
import functools
import itertools
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional

import click
from pydantic import BaseModel
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table

from serene.core import freecomplete, latincomplete
from serene.core.complex import simplicize
from serene.core.config import DEFAULT_LIMITS, SearchSettings
from serene.core.constructions import available_builtins, builtin
from serene.core.errors import CompletionCapError, SereneError
from serene.core.export import (
    SerenationExporter,
    facet_rows,
    to_adjacency_json,
    to_dot,
)
from serene.core.fixtures import available_fixtures, fixture, oriented_fixture
from serene.core.geometry import chart_input, chart_output
from serene.core.models import OperationTable, OrientedComplex
from serene.core.ncgraph import graph_report, nc_graph
from serene.core.quasigroup import (
    generated_subquasigroup,
    is_commutative,
    nct,
    validate,
)
from serene.core.storage import (
    dump_model,
    load_complex,
    load_oriented,
    load_partial,
    load_table,
    write_text_atomic,
)
from serene.core.topology import serenation_report

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger("serene")

EXISTING_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


seed_option = click.option(
    "--seed", type=int, default=None, help="Seed for randomized steps"
)


def common_options(command: Callable) -> Callable:
    """--format and --out, shared by every command."""
    command = click.option(
        "--out", "-o", type=click.Path(dir_okay=False, path_type=Path),
        help="Write the JSON/DOT artifact to this file",
    )(command)
    command = click.option(
        "--format", "-f", "fmt", type=click.Choice(["json", "text"]), default="json",
        show_default=True, help="Output format",
    )(command)
    return command


def handle_errors(command: Callable) -> Callable:
    """Report domain errors in red and exit with status 1."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (SereneError, ValueError) as e:
            logger.debug("command failed", exc_info=True)
            err_console.print(f"[red]Error:[/red] {escape(str(e))}", highlight=False)
            sys.exit(1)

    return wrapper


def emit(payload: Any, out: Optional[Path]) -> None:
    """Print a model, dict or raw text; or write it atomically with --out."""
    if isinstance(payload, BaseModel):
        text = dump_model(payload)
    elif isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(payload, indent=2, sort_keys=True)
    if out is not None:
        write_text_atomic(out, text if text.endswith("\n") else text + "\n")
        err_console.print(f"[green]✓ Wrote[/green] {out}")
    else:
        click.echo(text)


def resolve_table(path: Optional[Path], example: Optional[str]) -> OperationTable:
    if (path is None) == (example is None):
        raise click.UsageError("give exactly one of TABLE or --example")
    return builtin(example) if example else load_table(path)


def resolve_oriented(path: Optional[Path], name: Optional[str]) -> OrientedComplex:
    if (path is None) == (name is None):
        raise click.UsageError("give exactly one of MESH or --fixture")
    return oriented_fixture(name) if name else load_oriented(path)


def _number(value: Any) -> Any:
    return str(value) if isinstance(value, Fraction) else value


@click.group()
@click.version_option()
@click.option("--verbose", "-v", is_flag=True, help="Enable debug logging")
def cli(verbose: bool):
    """Serene - alternating quasigroups, serenations and free completions."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


@cli.command(name="validate")
@click.argument("table_path", required=False, type=EXISTING_FILE)
@click.option("--example", "-e", help="Builtin table name instead of a file")
@click.option(
    "--generate", "-g",
    help="Comma-separated elements whose generated subquasigroup is reported",
)
@common_options
@handle_errors
def validate_table(
    table_path: Optional[Path],
    example: Optional[str],
    generate: Optional[str],
    fmt: str,
    out: Optional[Path],
):
    """Check the Latin and alternating properties of a table."""
    table = resolve_table(table_path, example)
    cert = validate(table)
    payload = {
        "arity": table.arity,
        "order": table.order,
        "latin": cert.latin,
        "alternating": cert.alternating,
        "permutomorphism_group_size": cert.permutomorphism_group_size,
        "group_size_exact": cert.group_size_exact,
        "commutative": is_commutative(table),
        "nct_size": len(nct(table)) if cert.latin and cert.alternating else None,
    }
    if generate:
        generators = [table.element(t.strip()) for t in generate.split(",")]
        payload["generated"] = [
            table.label(x) for x in generated_subquasigroup(table, generators)
        ]
    if fmt == "json":
        emit(payload, out)
        return

    rows = Table(show_header=True, header_style="bold magenta")
    rows.add_column("Property")
    rows.add_column("Value")
    for key, value in payload.items():
        shown = ", ".join(value) if isinstance(value, list) else str(value)
        rows.add_row(key.replace("_", " "), shown)
    console.print(rows)


@cli.command()
@click.argument("name", required=False)
@common_options
@handle_errors
def example(name: Optional[str], fmt: str, out: Optional[Path]):
    """Emit a builtin table as JSON, or list the builtin names."""
    if name is None:
        for shown in available_builtins():
            click.echo(shown)
        return
    table = builtin(name)
    if fmt == "json":
        emit(table, out)
        return

    grid = Table(show_header=True, header_style="bold magenta", title=name)
    if table.arity == 2:
        grid.add_column("*")
        for y in range(table.order):
            grid.add_column(table.label(y))
        for x in range(table.order):
            grid.add_row(
                table.label(x),
                *(table.label(table.value((x, y))) for y in range(table.order)),
            )
    else:
        grid.add_column("arguments")
        grid.add_column("value")
        for args in itertools.product(range(table.order), repeat=table.arity):
            grid.add_row(
                " ".join(table.label(a) for a in args), table.label(table.value(args))
            )
    console.print(grid)


@cli.command(name="simplicize")
@click.argument("table_path", required=False, type=EXISTING_FILE)
@click.option("--example", "-e", help="Builtin table name instead of a file")
@common_options
@handle_errors
def simplicize_table(
    table_path: Optional[Path],
    example: Optional[str],
    fmt: str,
    out: Optional[Path],
):
    """Facet table of the simplicial pseudomanifold of a table."""
    table = resolve_table(table_path, example)
    complex_ = simplicize(table)
    rows = facet_rows(table, complex_)
    if fmt == "json":
        emit(
            {
                "dim": complex_.dim,
                "vertices": [v.plain() for v in complex_.vertices],
                "facets": [list(f) for f in complex_.facets],
                "rows": [row.model_dump() for row in rows],
            },
            out,
        )
        return

    facets = Table(
        show_header=True,
        header_style="bold magenta",
        title=f"{len(rows)} facets on {len(complex_.vertices)} vertices",
    )
    facets.add_column("tuple")
    facets.add_column("value")
    facets.add_column("facet")
    for row in rows:
        facets.add_row(
            "(" + ",".join(row.tuple_labels) + ")",
            row.value_label,
            "{" + ", ".join(row.facet_display) + "}",
        )
    console.print(facets)


@cli.command()
@click.argument("table_path", required=False, type=EXISTING_FILE)
@click.option("--example", "-e", help="Builtin table name instead of a file")
@click.option("--dot", is_flag=True, help="Emit the graph in DOT")
@click.option("--adjacency", is_flag=True, help="Emit vertices and adjacency lists")
@common_options
@handle_errors
def ncgraph(
    table_path: Optional[Path],
    example: Optional[str],
    dot: bool,
    adjacency: bool,
    fmt: str,
    out: Optional[Path],
):
    """Build the NC graph and report its invariants."""
    table = resolve_table(table_path, example)
    graph = nc_graph(table)
    if dot:
        emit(to_dot(graph, example or table_path.stem), out)
        return
    if adjacency:
        emit(to_adjacency_json(graph), out)
        return
    report = graph_report(graph)
    if fmt == "json":
        emit(report, out)
        return

    rows = Table(show_header=True, header_style="bold magenta", title="NC graph")
    rows.add_column("Invariant")
    rows.add_column("Value")
    for key, value in report.model_dump().items():
        rows.add_row(key.replace("_", " "), str(value))
    console.print(rows)


@cli.command()
@click.argument("complex_path", required=False, type=EXISTING_FILE)
@click.option("--fixture", "fixture_name", help="Bundled triangulation name")
@click.option("--example", "-e", help="Simplicize a builtin table first")
@common_options
@handle_errors
def invariants(
    complex_path: Optional[Path],
    fixture_name: Optional[str],
    example: Optional[str],
    fmt: str,
    out: Optional[Path],
):
    """Per-component homology, orientability and vertex links."""
    given = [x for x in (complex_path, fixture_name, example) if x is not None]
    if len(given) != 1:
        raise click.UsageError("give exactly one of COMPLEX, --fixture or --example")
    if example:
        complex_ = simplicize(builtin(example))
    elif fixture_name:
        complex_ = fixture(fixture_name)
    else:
        complex_ = load_complex(complex_path)
    report = serenation_report(complex_)
    if fmt == "json":
        emit(report, out)
        return

    rows = Table(show_header=True, header_style="bold magenta", title="Components")
    for column in ("#", "facets", "chi", "Z/2 betti", "orientable", "links"):
        rows.add_column(column)
    for i, summary in enumerate(report.components):
        rows.add_row(
            str(i),
            str(len(summary.facets)),
            str(summary.euler_characteristic),
            str(summary.z2_betti),
            str(summary.orientable),
            "sphere-like" if summary.all_sphere_like else "[yellow]singular[/yellow]",
        )
    console.print(rows)


@cli.command()
@click.option("--table", "table_path", type=EXISTING_FILE, help="Table JSON")
@click.option("--example", "-e", help="Builtin table name instead of a file")
@click.option("--tuple", "args", required=True, help="Comma-separated arguments")
@click.option(
    "--type", "chart_type", type=click.Choice(["in", "out"]), default="in",
    show_default=True, help="Input or output chart",
)
@click.option("--u", "coords", required=True, help="Comma-separated coordinates")
@click.option("--exact", is_flag=True, help="Evaluate with rationals")
@common_options
@handle_errors
def chart(
    table_path: Optional[Path],
    example: Optional[str],
    args: str,
    chart_type: str,
    coords: str,
    exact: bool,
    fmt: str,
    out: Optional[Path],
):
    """Barycentric coefficients of a bipyramid chart value."""
    table = resolve_table(table_path, example)
    a = [table.element(token.strip()) for token in args.split(",")]
    u = [Fraction(x.strip()) if exact else float(x) for x in coords.split(",")]
    evaluate = chart_input if chart_type == "in" else chart_output
    point = evaluate(table, a, u, exact=exact)
    payload = {
        "chart": point.chart.value,
        "branch": point.branch.value,
        "coefficients": {
            vertex.plain(): _number(value)
            for vertex, value in point.coefficients.items()
        },
        "total": _number(point.total()),
    }
    if fmt == "json":
        emit(payload, out)
        return

    rows = Table(
        show_header=True,
        header_style="bold magenta",
        title=f"{point.chart.value} chart, branch {point.branch.value}",
    )
    rows.add_column("vertex")
    rows.add_column("coefficient")
    for vertex, value in point.coefficients.items():
        rows.add_row(vertex.display(), str(value))
    console.print(rows)


@cli.command(name="complete-free")
@click.argument("mesh_path", required=False, type=EXISTING_FILE)
@click.option("--fixture", "fixture_name", help="Bundled triangulation name")
@click.option(
    "--levels", "-l", type=click.IntRange(min=0), default=1, show_default=True
)
@click.option(
    "--cap", type=click.IntRange(min=1),
    default=DEFAULT_LIMITS.free_completion_element_cap, show_default=True,
    help="Largest element count to materialize",
)
@click.option(
    "--samples", type=click.IntRange(min=1),
    default=DEFAULT_LIMITS.spot_check_samples, show_default=True,
    help="Spot-check samples once the cap is reached",
)
@seed_option
@common_options
@handle_errors
def complete_free(
    mesh_path: Optional[Path],
    fixture_name: Optional[str],
    levels: int,
    cap: int,
    samples: int,
    fmt: str,
    out: Optional[Path],
    seed: Optional[int],
):
    """Free completion of an oriented triangulation, level by level."""
    gamma = resolve_oriented(mesh_path, fixture_name)
    limits = DEFAULT_LIMITS.model_copy(update={"free_completion_element_cap": cap})
    state = origin = freecomplete.seed(gamma)
    summaries = [state.summary()]
    audits = [freecomplete.verify_state(state)]
    capped = None
    spot = None
    for _ in range(levels):
        try:
            following = freecomplete.step(state, limits, verify=False)
        except CompletionCapError as e:
            capped = {"level": state.level + 1, "projected": e.projected, "cap": e.cap}
            spot = freecomplete.spot_check(state, samples, seed)
            break
        audits.append(freecomplete.verify_state(following, state))
        summaries.append(following.summary())
        state = following
    serenity = freecomplete.verify_serene(gamma, origin)
    payload = {
        "levels": [s.model_dump() for s in summaries],
        "audits": [a.model_dump() for a in audits],
        "next": freecomplete.census(state).model_dump(),
        "capped": capped,
        "spot_check": spot.model_dump() if spot else None,
        "serenity": serenity.model_dump(),
    }
    if fmt == "json":
        emit(payload, out)
        return

    rows = Table(show_header=True, header_style="bold magenta", title="Free completion")
    columns = ("level", "elements", "base", "fct", "prod", "div", "tuples", "audit")
    for column in columns:
        rows.add_column(column)
    for summary, audit in zip(summaries, audits):
        rows.add_row(
            str(summary.level),
            str(summary.elements),
            *(str(summary.by_kind[k]) for k in ("base", "fct", "prod", "div")),
            str(summary.domain_tuples),
            "[green]ok[/green]" if audit.ok else "[red]failed[/red]",
        )
    console.print(rows)
    if capped:
        console.print(
            f"[yellow]Level {capped['level']} would hold {capped['projected']} "
            f"elements (cap {capped['cap']}); spot check "
            f"{'passed' if spot.ok else 'failed'}[/yellow]"
        )
    verdict = "[green]serene[/green]" if serenity.ok else "[red]mismatch[/red]"
    console.print(
        f"Level 0 simplicization: {serenity.facet_count} facets, "
        f"chi = {serenity.euler_characteristic}, {verdict}"
    )


@cli.command(name="complete-latin")
@click.argument("partial_path", type=EXISTING_FILE)
@click.option("--max-order", type=click.IntRange(min=1), help="Largest carrier size")
@click.option(
    "--budget", type=click.IntRange(min=1), default=10_000_000, show_default=True,
    help="Decision nodes per order",
)
@click.option("--unreduced", is_flag=True, help="Search tuple by tuple")
@seed_option
@common_options
@handle_errors
def complete_latin(
    partial_path: Path,
    max_order: Optional[int],
    budget: int,
    unreduced: bool,
    fmt: str,
    out: Optional[Path],
    seed: Optional[int],
):
    """Complete a partial alternating Latin cube."""
    partial = load_partial(partial_path)
    settings = SearchSettings(
        max_order=max_order, budget=budget, seed=seed, reduce_symmetry=not unreduced
    )
    result = latincomplete.complete_with(partial, settings)
    if fmt == "json":
        emit(result, out)
        return
    _print_attempts(result)


def _print_attempts(result: latincomplete.CompletionResult) -> None:
    rows = Table(show_header=True, header_style="bold magenta", title="Search")
    for column in ("order", "outcome", "nodes", "cells", "preassigned"):
        rows.add_column(column)
    for attempt in result.attempts:
        rows.add_row(
            str(attempt.order),
            attempt.outcome,
            str(attempt.nodes),
            str(attempt.cells),
            str(attempt.preassigned),
        )
    console.print(rows)
    if result.found:
        console.print(
            f"[green]✓ Found an order {result.table.order} completion[/green]"
        )
    else:
        console.print("[yellow]No completion found[/yellow]")


@cli.command()
@click.argument("mesh_path", required=False, type=EXISTING_FILE)
@click.option("--fixture", "fixture_name", help="Bundled triangulation name")
@click.option("--max-order", type=click.IntRange(min=1), help="Largest carrier size")
@click.option(
    "--budget", type=click.IntRange(min=1), default=10_000_000, show_default=True,
    help="Decision nodes per order",
)
@seed_option
@common_options
@handle_errors
def probe(
    mesh_path: Optional[Path],
    fixture_name: Optional[str],
    max_order: Optional[int],
    budget: int,
    fmt: str,
    out: Optional[Path],
    seed: Optional[int],
):
    """Look for a finite quasigroup whose serenation contains the mesh."""
    gamma = resolve_oriented(mesh_path, fixture_name)
    result = latincomplete.quasifinite_probe(gamma, max_order, budget, seed)
    if fmt == "json":
        emit(result, out)
        return
    _print_attempts(result.completion)
    if result.matched_component is not None:
        console.print(
            f"Component {result.matched_component} of {result.components} matches "
            f"(chi = {result.euler_characteristic}, genus = {result.genus}, "
            f"exact facets: {result.exact_component})"
        )


@cli.command(name="fixture")
@click.argument("name", required=False)
@click.option("--oriented", is_flag=True, help="Include the propagated orientation")
@common_options
@handle_errors
def fixture_command(
    name: Optional[str],
    oriented: bool,
    fmt: str,
    out: Optional[Path],
):
    """Dump a bundled triangulation as complex JSON, or list the names."""
    if name is None:
        for shown in available_fixtures():
            click.echo(shown)
        return
    emit(oriented_fixture(name) if oriented else fixture(name), out)


@cli.command()
@click.argument("kind", type=click.Choice(["csv", "pdf"]))
@click.argument("table_path", required=False, type=EXISTING_FILE)
@click.option("--example", "-e", help="Builtin table name instead of a file")
@common_options
@handle_errors
def report(
    kind: str,
    table_path: Optional[Path],
    example: Optional[str],
    fmt: str,
    out: Optional[Path],
):
    """Export the facet table (csv) or the invariants report (pdf) to --out."""
    if out is None:
        raise click.UsageError("report needs --out PATH")
    table = resolve_table(table_path, example)
    exporter = SerenationExporter(example or table_path.stem, table)
    if kind == "csv":
        exporter.facet_table_csv(out)
    else:
        exporter.invariants_pdf(out)
    if fmt == "json":
        click.echo(
            json.dumps(
                {
                    "kind": kind,
                    "path": str(out),
                    "facets": len(exporter.rows),
                    "components": len(exporter.report.components),
                },
                indent=2,
                sort_keys=True,
            )
        )
        return
    console.print(f"[green]✓ Exported {kind.upper()} report to[/green] {out}")


if __name__ == "__main__":
    cli()
