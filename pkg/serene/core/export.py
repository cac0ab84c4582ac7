"""Export of NC graphs, facet tables and invariant reports."""
import csv
import json
from pathlib import Path
from typing import List, Optional

import networkx as nx
from fpdf import FPDF, XPos, YPos
from pydantic import BaseModel, ConfigDict

from .complex import facet_of, simplicize
from .models import OperationTable, SimpComplex
from .quasigroup import nct_orbits
from .topology import ComponentReport, serenation_report


def to_dot(graph: nx.Graph, name: str = "ncgraph") -> str:
    """DOT text; nodes are labelled with their orbit representatives."""
    lines = [f"graph {json.dumps(name)} {{"]
    for node, data in sorted(graph.nodes(data=True)):
        label = data.get("label", str(node))
        lines.append(f"  {node} [label={json.dumps(label)}];")
    for u, v in sorted(tuple(sorted(edge)) for edge in graph.edges):
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_adjacency_json(graph: nx.Graph) -> str:
    nodes = sorted(graph.nodes)
    payload = {
        "vertices": [
            {"id": node, "label": graph.nodes[node].get("label", str(node))}
            for node in nodes
        ],
        "adjacency": [sorted(graph.adj[node]) for node in nodes],
    }
    return json.dumps(payload, indent=2)


class FacetRow(BaseModel):
    """One noncommuting orbit and the facet it spans."""

    model_config = ConfigDict(frozen=True)

    tuple_labels: List[str]
    value_label: str
    facet: List[int]
    facet_labels: List[str]
    facet_display: List[str]


def facet_rows(
    table: OperationTable, complex_: Optional[SimpComplex] = None
) -> List[FacetRow]:
    """Rows in the order of the orbit representatives."""
    complex_ = complex_ or simplicize(table)
    rows = []
    for rep, value in nct_orbits(table):
        facet = facet_of(complex_, table, rep)
        vertices = [complex_.vertices[v] for v in facet]
        rows.append(
            FacetRow(
                tuple_labels=[table.label(x) for x in rep],
                value_label=table.label(value),
                facet=list(facet),
                facet_labels=[v.plain() for v in vertices],
                facet_display=[v.display() for v in vertices],
            )
        )
    return rows


class SerenationExporter:
    """Writes the facet table and the serenation report of one table."""

    def __init__(self, name: str, table: OperationTable):
        self.name = name
        self.table = table
        self.complex = simplicize(table)
        self.rows = facet_rows(table, self.complex)
        self._report: Optional[ComponentReport] = None

    @property
    def report(self) -> ComponentReport:
        if self._report is None:
            self._report = serenation_report(self.complex)
        return self._report

    def facet_table_csv(self, path: Path) -> None:
        with open(path, "w", newline="") as csvfile:
            writer = csv.writer(csvfile)
            writer.writerow(["tuple", "value", "facet"])
            for row in self.rows:
                writer.writerow(
                    [
                        "(" + ",".join(row.tuple_labels) + ")",
                        row.value_label,
                        " ".join(row.facet_labels),
                    ]
                )

    def invariants_pdf(self, path: Path) -> None:
        pdf = FPDF()
        pdf.add_page()

        pdf.set_font("Helvetica", "B", 16)
        pdf.cell(
            0, 10, f"Serenation of {self.name}",
            align="C", new_x=XPos.LMARGIN, new_y=YPos.NEXT,
        )
        pdf.set_font("Helvetica", "", 10)
        pdf.cell(
            0, 8,
            f"arity {self.table.arity}, order {self.table.order}, "
            f"{len(self.complex.vertices)} vertices, {len(self.complex.facets)} facets",
            align="C", new_x=XPos.LMARGIN, new_y=YPos.NEXT,
        )

        pdf.set_font("Helvetica", "B", 14)
        pdf.cell(0, 10, "Components", new_x=XPos.LMARGIN, new_y=YPos.NEXT)
        pdf.set_font("Helvetica", "", 11)
        for i, summary in enumerate(self.report.components):
            orientable = {None: "n/a", True: "yes", False: "no"}[summary.orientable]
            betti = ", ".join(str(b) for b in summary.z2_betti)
            pdf.cell(
                0, 7,
                f"#{i}: {len(summary.facets)} facets, chi = "
                f"{summary.euler_characteristic}, Z/2 betti ({betti}), "
                f"orientable {orientable}, sphere-like links "
                f"{'yes' if summary.all_sphere_like else 'no'}",
                new_x=XPos.LMARGIN, new_y=YPos.NEXT,
            )

        pdf.set_font("Helvetica", "B", 14)
        pdf.cell(0, 10, "Facets", new_x=XPos.LMARGIN, new_y=YPos.NEXT)
        pdf.set_font("Courier", "", 9)
        for row in self.rows:
            pdf.cell(
                0, 5,
                f"({','.join(row.tuple_labels)}) -> {row.value_label}   "
                f"{{{', '.join(row.facet_labels)}}}",
                new_x=XPos.LMARGIN, new_y=YPos.NEXT,
            )

        pdf.output(str(path))
