"""Tests for graph, facet table and report export."""
import csv
import json

import pytest

from serene.core.export import (
    SerenationExporter,
    facet_rows,
    to_adjacency_json,
    to_dot,
)
from serene.core.ncgraph import nc_graph


def test_to_dot(a6):
    """Test the DOT text of the order-6 graph."""
    text = to_dot(nc_graph(a6), name="a6")
    lines = text.splitlines()
    assert lines[0] == 'graph "a6" {'
    assert lines[-1] == "}"
    assert sum("[label=" in line for line in lines) == 16
    assert sum(" -- " in line for line in lines) == 32


def test_to_adjacency_json(q8):
    """Test adjacency lists of the Q8 graph."""
    payload = json.loads(to_adjacency_json(nc_graph(q8)))
    assert len(payload["vertices"]) == 24
    assert payload["vertices"][0]["id"] == 0
    assert all(len(neighbours) == 3 for neighbours in payload["adjacency"])


def test_facet_rows(q8):
    """Test one row per noncommuting orbit."""
    rows = facet_rows(q8)
    assert len(rows) == 24
    first = rows[0]
    assert len(first.tuple_labels) == 2
    assert len(first.facet) == 3
    assert first.facet_labels[-1].startswith("out:")
    assert first.facet_display[-1].endswith("\u0305")


@pytest.fixture
def exporter(a5):
    return SerenationExporter("a5", a5)


def test_facet_table_csv(exporter, tmp_path):
    """Test the CSV facet table."""
    path = tmp_path / "facets.csv"
    exporter.facet_table_csv(path)
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["tuple", "value", "facet"]
    assert len(rows) == 21
    assert ["(0,1,2)", "3", "in:0 in:1 in:2 out:3"] in rows


def test_invariants_pdf(exporter, tmp_path):
    """Test the PDF report is written."""
    path = tmp_path / "report.pdf"
    exporter.invariants_pdf(path)
    assert path.read_bytes().startswith(b"%PDF")
    assert len(exporter.report.components) == 1
