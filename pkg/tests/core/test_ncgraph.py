"""Tests for NC graphs, the Johnson embedding and the graph retract."""
from fractions import Fraction

import networkx as nx
import pytest

from serene.core.config import EngineLimits
from serene.core.constructions import cyclic_group
from serene.core.ncgraph import (
    field_census,
    graph_report,
    hypercube_dimension,
    johnson_embedding,
    nc_graph,
    retract_embedding,
    retract_point,
)


def test_q8_graph(q8):
    """Test the Q8 NC graph is three disjoint 3-cubes."""
    graph = nc_graph(q8)
    report = graph_report(graph)
    assert report.vertices == 24
    assert report.edges == 36
    assert report.regular_degree == 3
    assert report.components == 3
    assert report.component_hypercube_dims == (3, 3, 3)
    assert report.hypercube_dim is None
    assert report.girth == 4
    assert report.bipartite


def test_q8_edge_rules(q8):
    """Test one edge from each adjacency rule."""
    graph = nc_graph(q8)
    node = {data["tuple"]: n for n, data in graph.nodes(data=True)}
    i, j, mj = (q8.element(x) for x in ("i", "j", "-j"))
    assert graph.edges[node[(i, j)], node[(j, i)]]["rule"] == 1
    assert graph.edges[node[(i, j)], node[(mj, i)]]["rule"] == 2
    assert graph.nodes[node[(i, j)]]["label"] == "(i,j)"


def test_order5_graph(a5):
    """Test the order-5 graph is 4-regular on 20 vertices."""
    report = graph_report(nc_graph(a5))
    assert report.vertices == 20
    assert report.regular_degree == 4
    assert report.components == 1


def test_order6_graph_is_a_hypercube(a6):
    """Test the order-6 graph is the 4-cube."""
    graph = nc_graph(a6)
    report = graph_report(graph)
    assert report.vertices == 16
    assert report.edges == 32
    assert report.hypercube_dim == 4
    assert hypercube_dimension(graph, EngineLimits(hypercube_max_vertices=8)) is None


def test_hypercube_dimension_rejects_cycles():
    """Test an 8-cycle is not a cube."""
    assert hypercube_dimension(nx.cycle_graph(8)) is None
    assert hypercube_dimension(nx.cycle_graph(4)) == 2
    assert hypercube_dimension(nx.hypercube_graph(5)) == 5


def test_empty_graph():
    """Test commutative tables give an empty graph."""
    table = cyclic_group(4)
    graph = nc_graph(table)
    assert graph.number_of_nodes() == 0
    assert graph_report(graph).girth is None
    assert johnson_embedding(table).subsets == ()
    with pytest.raises(ValueError):
        retract_embedding(table)


@pytest.mark.parametrize("name", ["q8", "a5", "a6"])
def test_johnson_embedding(name, request):
    """Test adjacency matches facets sharing n vertices."""
    table = request.getfixturevalue(name)
    embedding = johnson_embedding(table)
    assert embedding.subset_size == table.arity + 1
    assert len(set(embedding.subsets)) == len(embedding.subsets)
    assert embedding.pairs_checked > 0


def test_retract_embedding(q8):
    """Test barycenters, edge midpoints and interpolation along an edge."""
    embedding = retract_embedding(q8)
    assert len(embedding.vertices) == 24
    assert len(embedding.edges) == 36
    for coefficients in embedding.vertices.values():
        assert sum(coefficients.values()) == 1
        assert set(coefficients.values()) == {Fraction(1, 3)}
    edge = next(iter(embedding.edges))
    start = retract_point(embedding, edge, Fraction(1))
    assert start == embedding.vertices[edge[0]]
    end = retract_point(embedding, edge, 0)
    assert end == embedding.edges[edge]
    middle = retract_point(embedding, edge, Fraction(1, 2))
    assert sum(middle.values()) == 1
    with pytest.raises(ValueError):
        retract_point(embedding, edge, Fraction(3, 2))
    with pytest.raises(KeyError):
        retract_point(embedding, (0, 0), Fraction(1, 2))


def test_field_census():
    """Test the NC count of F_3^(2) against both vertex count readings."""
    census = field_census(3, 2)
    assert census.order == 27
    assert census.nct_size == 432
    assert census.gl_order == 48
    assert census.gl_times_vectors == 432
    assert census.ncgraph_vertices == 432
    assert census.readings.product_from_zero == census.nct_size
