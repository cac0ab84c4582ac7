"""NC graphs: construction, Johnson embedding, graph retract and invariants."""
import itertools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict

from .complex import Face, simplicize, vertex_index
from .config import DEFAULT_LIMITS, EngineLimits
from .constructions import (
    VertexCountReadings,
    field_quasigroup,
    gl_order,
    vertex_count_readings,
)
from .errors import InternalConsistencyError
from .models import OperationTable, SimpComplex, VertexTag
from .quasigroup import nct_mask, nct_orbits

logger = logging.getLogger(__name__)


def nc_graph(table: OperationTable) -> nx.Graph:
    """Graph on alt_n-orbits of noncommuting tuples.

    Nodes are 0..V-1 in lexicographic order of the canonical representative
    and carry ``tuple``, ``value``, ``inputs`` and ``label`` attributes.
    """
    n = table.arity
    graph = nx.Graph(arity=n)
    orbits = nct_orbits(table)
    for node, (rep, value) in enumerate(orbits):
        graph.add_node(
            node,
            tuple=rep,
            value=value,
            inputs=frozenset(rep),
            label="(" + ",".join(table.label(x) for x in rep) + ")",
        )

    # Rule 1: same input set.
    by_inputs: Dict[frozenset, List[int]] = defaultdict(list)
    for node, (rep, _) in enumerate(orbits):
        by_inputs[frozenset(rep)].append(node)
    for nodes in by_inputs.values():
        graph.add_edges_from(itertools.combinations(nodes, 2), rule=1)

    # Rule 2: same output and exactly n-1 shared inputs.
    buckets: Dict[Tuple[int, frozenset], List[int]] = defaultdict(list)
    for node, (rep, value) in enumerate(orbits):
        for shared in itertools.combinations(sorted(set(rep)), n - 1):
            buckets[(value, frozenset(shared))].append(node)
    for nodes in buckets.values():
        for u, v in itertools.combinations(nodes, 2):
            if graph.nodes[u]["inputs"] != graph.nodes[v]["inputs"]:
                graph.add_edge(u, v, rule=2)

    logger.debug(
        "nc graph: %d vertices, %d edges",
        graph.number_of_nodes(),
        graph.number_of_edges(),
    )
    return graph


def node_facets(
    table: OperationTable, graph: nx.Graph, complex_: Optional[SimpComplex] = None
) -> Dict[int, Face]:
    """Facet of the simplicization belonging to each NC-graph vertex."""
    complex_ = complex_ or simplicize(table)
    index = vertex_index(complex_)
    return {
        node: tuple(
            sorted(
                [index[(VertexTag.INPUT, a)] for a in data["tuple"]]
                + [index[(VertexTag.OUTPUT, data["value"])]]
            )
        )
        for node, data in graph.nodes(data=True)
    }


class JohnsonEmbedding(BaseModel):
    """NC-graph vertices as (n+1)-subsets of the simplicization's vertex set."""

    model_config = ConfigDict(frozen=True)

    ground_size: int
    subset_size: int
    subsets: Tuple[Tuple[int, ...], ...]
    pairs_checked: int


def johnson_embedding(
    table: OperationTable, graph: Optional[nx.Graph] = None
) -> JohnsonEmbedding:
    """Map each vertex to its facet and check adjacency iff n shared elements."""
    n = table.arity
    graph = graph if graph is not None else nc_graph(table)
    if graph.number_of_nodes() == 0:
        return JohnsonEmbedding(
            ground_size=0, subset_size=n + 1, subsets=(), pairs_checked=0
        )
    complex_ = simplicize(table)
    facets = node_facets(table, graph, complex_)
    nodes = sorted(graph.nodes)
    subsets = tuple(facets[node] for node in nodes)
    if len(set(subsets)) != len(subsets):
        raise InternalConsistencyError("two NC-graph vertices share a facet")

    incidence = np.zeros((len(nodes), len(complex_.vertices)), dtype=np.int64)
    for row, subset in enumerate(subsets):
        incidence[row, list(subset)] = 1
    shared = incidence @ incidence.T
    adjacent = nx.to_numpy_array(graph, nodelist=nodes, dtype=np.int64) > 0
    expected = shared == n
    np.fill_diagonal(expected, False)
    bad = np.argwhere(np.triu(adjacent != expected, k=1))
    if bad.size:
        u, v = (nodes[i] for i in bad[0])
        raise InternalConsistencyError(
            f"vertices {u} and {v}: adjacent={bool(adjacent[bad[0][0], bad[0][1]])} "
            f"but their facets share {int(shared[bad[0][0], bad[0][1]])} vertices"
        )
    return JohnsonEmbedding(
        ground_size=len(complex_.vertices),
        subset_size=n + 1,
        subsets=subsets,
        pairs_checked=len(nodes) * (len(nodes) - 1) // 2,
    )


class GraphReport(BaseModel):
    """Exact invariants of a small graph."""

    model_config = ConfigDict(frozen=True)

    vertices: int
    edges: int
    components: int
    degree_histogram: Dict[int, int]
    regular_degree: Optional[int] = None
    bipartite: bool
    girth: Optional[int] = None
    component_hypercube_dims: Tuple[Optional[int], ...] = ()
    hypercube_dim: Optional[int] = None


def hypercube_dimension(
    graph: nx.Graph, limits: EngineLimits = DEFAULT_LIMITS
) -> Optional[int]:
    """d when a connected graph is the d-cube, None otherwise or when too large."""
    size = graph.number_of_nodes()
    if size == 0 or size & (size - 1) or size > limits.hypercube_max_vertices:
        return None
    d = size.bit_length() - 1
    if d == 0:
        return 0
    if any(degree != d for _, degree in graph.degree()):
        return None
    if not nx.is_connected(graph) or not nx.is_bipartite(graph):
        return None
    if not nx.is_isomorphic(graph, nx.hypercube_graph(d)):
        return None
    return d


def graph_report(graph: nx.Graph, limits: EngineLimits = DEFAULT_LIMITS) -> GraphReport:
    degrees = Counter(degree for _, degree in graph.degree())
    regular = next(iter(degrees)) if len(degrees) == 1 else None
    parts = [graph.subgraph(part).copy() for part in nx.connected_components(graph)]
    parts.sort(key=lambda part: min(part.nodes))
    component_dims = tuple(hypercube_dimension(part, limits) for part in parts)
    girth = nx.girth(graph) if graph.number_of_nodes() else float("inf")
    return GraphReport(
        vertices=graph.number_of_nodes(),
        edges=graph.number_of_edges(),
        components=len(parts),
        degree_histogram=dict(sorted(degrees.items())),
        regular_degree=regular,
        bipartite=nx.is_bipartite(graph),
        girth=None if girth == float("inf") else int(girth),
        component_hypercube_dims=component_dims,
        hypercube_dim=component_dims[0] if len(parts) == 1 else None,
    )


@dataclass(frozen=True)
class RetractEmbedding:
    """Exact barycentric data of the graph retract.

    Coefficient maps are keyed by simplicization vertex index.
    """

    arity: int
    facets: Dict[int, Face]
    vertices: Dict[int, Dict[int, Fraction]]
    edges: Dict[Tuple[int, int], Dict[int, Fraction]]


def retract_embedding(table: OperationTable) -> RetractEmbedding:
    n = table.arity
    graph = nc_graph(table)
    if graph.number_of_nodes() == 0:
        raise ValueError("table has no noncommuting tuples")
    facets = node_facets(table, graph)
    barycenter = Fraction(1, n + 1)
    midpoint = Fraction(1, n)
    vertices = {node: {v: barycenter for v in facet} for node, facet in facets.items()}
    edges: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for u, v in sorted(tuple(sorted(edge)) for edge in graph.edges):
        shared = sorted(set(facets[u]) & set(facets[v]))
        if len(shared) != n:
            raise InternalConsistencyError(
                f"edge ({u}, {v}) joins facets sharing {len(shared)} vertices"
            )
        edges[(u, v)] = {w: midpoint for w in shared}
    return RetractEmbedding(arity=n, facets=facets, vertices=vertices, edges=edges)


def retract_point(
    embedding: RetractEmbedding, edge: Tuple[int, int], gamma: Fraction
) -> Dict[int, Fraction]:
    """Point of the edge image on the side of ``edge[0]``.

    gamma/(n+1) on the first facet plus (1-gamma)/n on the shared ridge.
    """
    gamma = Fraction(gamma)
    if not 0 <= gamma <= 1:
        raise ValueError(f"gamma = {gamma} is outside [0, 1]")
    key = tuple(sorted(edge))
    if key not in embedding.edges:
        raise KeyError(f"{edge} is not an edge of the NC graph")
    n = embedding.arity
    point: Dict[int, Fraction] = defaultdict(Fraction)
    for v in embedding.facets[edge[0]]:
        point[v] += gamma / (n + 1)
    for v in embedding.edges[key]:
        point[v] += (1 - gamma) / n
    return {v: c for v, c in sorted(point.items()) if c}


class FieldCensus(BaseModel):
    """Brute-force NC counts of F_q^(n) next to the closed-form readings."""

    model_config = ConfigDict(frozen=True)

    q: int
    n: int
    order: int
    nct_size: int
    gl_order: int
    gl_times_vectors: int
    ncgraph_vertices: int
    readings: VertexCountReadings


def field_census(q: int, n: int) -> FieldCensus:
    table = field_quasigroup(q, n)
    nct_size = int(np.count_nonzero(nct_mask(table)))
    group = gl_order(q, n)
    census = FieldCensus(
        q=q,
        n=n,
        order=table.order,
        nct_size=nct_size,
        gl_order=group,
        gl_times_vectors=group * q**n,
        ncgraph_vertices=len(nct_orbits(table)),
        readings=vertex_count_readings(q, n),
    )
    logger.info("F_%d^(%d): |nct| = %d, |GL| = %d", q, n, nct_size, group)
    return census
