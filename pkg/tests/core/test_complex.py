"""Tests for simplicization, orientation and face operations."""
import pytest

from serene.core.complex import (
    NotOrientable,
    check_pseudomanifold,
    complex_from_facets,
    disjoint_union,
    facet_of,
    faces,
    link,
    orient,
    orientation_class,
    oriented_from_ordered,
    ridge_incidence,
    simplicize,
    simplicize_map,
    star,
    subcomplex,
)
from serene.core.constructions import builtin, cyclic_group
from serene.core.errors import FaceLookupError, PreconditionError
from serene.core.fixtures import boundary_simplex, klein9, simplex
from serene.core.models import OperationTable, OrientedComplex
from serene.core.quasigroup import check_homomorphism
from serene.core.topology import euler_characteristic


BUILTIN_NAMES = ["trivial", "q8", "a5", "a6", "z4", "d3", "d4", "sum3x3", "field:3,2"]


def _labels(c, facet):
    return {c.vertices[v].plain() for v in facet}


def test_simplicize_q8(q8):
    """Test the 24 facets of the Q8 simplicization."""
    c = simplicize(q8)
    assert c.dim == 2
    assert len(c.facets) == 24
    assert len(c.vertices) == 12
    facet = facet_of(c, q8, (q8.element("i"), q8.element("j")))
    assert _labels(c, facet) == {"in:i", "in:j", "out:k"}
    facet = facet_of(c, q8, (q8.element("j"), q8.element("i")))
    assert _labels(c, facet) == {"in:i", "in:j", "out:-k"}


def test_simplicize_q8_facet_rows(q8):
    """Test every facet is {x, y, xy} over noncommuting units."""
    c = simplicize(q8)
    units = ["i", "-i", "j", "-j", "k", "-k"]
    expected = set()
    for x in units:
        for y in units:
            if x.lstrip("-") == y.lstrip("-"):
                continue
            xy = q8.label(q8.value((q8.element(x), q8.element(y))))
            expected.add(frozenset({f"in:{x}", f"in:{y}", f"out:{xy}"}))
    assert {frozenset(_labels(c, f)) for f in c.facets} == expected


def test_simplicize_order5(a5):
    """Test the order-5 facet (0,1,2) -> {0, 1, 2, 3-bar}."""
    c = simplicize(a5)
    assert c.dim == 3
    assert len(c.facets) == 20
    first = facet_of(c, a5, (0, 1, 2))
    assert _labels(c, first) == {"in:0", "in:1", "in:2", "out:3"}
    second = facet_of(c, a5, (1, 2, 3))
    assert _labels(c, second) == {"in:1", "in:2", "in:3", "out:4"}


def test_simplicize_order6(a6):
    """Test the order-6 product has 16 facets."""
    assert len(simplicize(a6).facets) == 16


def test_simplicize_commutative_table_is_empty():
    """Test a commutative table has no facets."""
    c = simplicize(cyclic_group(5))
    assert c.facets == ()
    assert c.vertices == ()


def test_simplicize_rejects_non_quasigroup():
    """Test the precondition on non-latin tables."""
    table = OperationTable(arity=2, order=2, values=(0, 0, 0, 0))
    with pytest.raises(PreconditionError, match="latin=False"):
        simplicize(table)


def test_facet_of_commuting_tuple(q8):
    """Test that a commuting tuple has no facet."""
    c = simplicize(q8)
    with pytest.raises(FaceLookupError):
        facet_of(c, q8, (q8.element("i"), q8.element("i")))


def test_simplicize_map_identity(q8):
    """Test the identity NC homomorphism induces the identity map."""
    mapping = list(range(8))
    check = check_homomorphism(q8, q8, mapping)
    result = simplicize_map(q8, q8, mapping, check)
    assert result.vertex_map == tuple(range(12))


def test_simplicize_map_needs_nc_hom(q8):
    """Test maps that lose noncommuting tuples are refused."""
    from serene.core.constructions import trivial

    check = check_homomorphism(q8, trivial(), [0] * 8)
    with pytest.raises(PreconditionError, match="NC homomorphism"):
        simplicize_map(q8, trivial(), [0] * 8, check)


def test_pseudomanifold_checks(q8):
    """Test closed complexes pass and a lone simplex fails."""
    assert check_pseudomanifold(simplicize(q8)).ok
    assert check_pseudomanifold(boundary_simplex(4)).ok
    lone = check_pseudomanifold(simplex(3))
    assert not lone.ok
    assert len(lone.violations) == 4


def test_ridge_incidence():
    """Test every ridge of a sphere lies in two facets."""
    incidence = ridge_incidence(boundary_simplex(3))
    assert len(incidence) == 6
    assert all(len(pairs) == 2 for pairs in incidence.values())


def test_orient(q8, a5):
    """Test orientability of the example simplicizations."""
    assert isinstance(orient(simplicize(a5)), OrientedComplex)
    oriented = orient(simplicize(q8))
    assert isinstance(oriented, OrientedComplex)
    assert len(oriented.orientation) == 24


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_simplicizations_are_orientable(name):
    """Test each builtin gives a closed, orientable pseudomanifold."""
    c = simplicize(builtin(name))
    assert check_pseudomanifold(c).ok
    oriented = orient(c)
    assert isinstance(oriented, OrientedComplex)
    assert len(oriented.orientation) == len(c.facets)


def test_random_product_simplicizations_are_orientable(random_products):
    """Test twisted products give closed, orientable pseudomanifolds."""
    nonempty = 0
    for table in random_products:
        c = simplicize(table)
        assert check_pseudomanifold(c).ok, check_pseudomanifold(c).violations
        assert isinstance(orient(c), OrientedComplex)
        nonempty += bool(c.facets)
    assert nonempty > 0


def test_orient_klein_bottle():
    """Test the Klein bottle gives a witness cycle."""
    result = orient(klein9())
    assert isinstance(result, NotOrientable)
    assert len(result.witness_cycle) >= 2
    assert len(result.ridge) == 2


def test_orient_rejects_non_pseudomanifold():
    """Test orient on a complex with boundary."""
    with pytest.raises(PreconditionError, match="pseudomanifold"):
        orient(simplex(2))


def test_orientation_class():
    """Test the even-permutation class of a negatively oriented facet."""
    c = complex_from_facets([(0, 1, 2)])
    oriented = OrientedComplex(base=c, orientation=(-1,))
    assert set(orientation_class(oriented, 0)) == {(0, 2, 1), (2, 1, 0), (1, 0, 2)}


def test_oriented_from_ordered():
    """Test signs recovered from explicit vertex orders."""
    c = boundary_simplex(2)
    oriented = oriented_from_ordered(c, [(1, 0), (1, 2), (2, 0)])
    assert oriented.orientation == (-1, -1, 1)
    with pytest.raises(FaceLookupError):
        oriented_from_ordered(c, [(0, 3)])


def test_faces_and_star(q8):
    """Test face counts, the star of an input vertex and missing faces."""
    c = simplicize(q8)
    assert len(faces(c, 0)) == 12
    assert len(faces(c, 1)) == 36
    assert len(star(c, (0,)).facets) == 8
    with pytest.raises(FaceLookupError):
        star(c, (0, 1, 2, 3))
    with pytest.raises(ValueError):
        faces(c, 3)


def test_link_of_output_vertex(a5):
    """Test the link of an output vertex of the order-5 complex."""
    c = simplicize(a5)
    index = {v.plain(): i for i, v in enumerate(c.vertices)}
    result = link(c, (index["out:3"],))
    assert result.pure
    assert len(result.complex.facets) == 4
    assert euler_characteristic(result.complex) == 2


def test_link_in_boundary_simplex():
    """Test a vertex link of the 3-sphere is the 2-sphere."""
    result = link(boundary_simplex(4), (0,))
    assert len(result.complex.facets) == 4
    assert euler_characteristic(result.complex) == 2
    with pytest.raises(FaceLookupError):
        link(boundary_simplex(4), (0, 9))


def test_subcomplex_and_union():
    """Test reindexing of subcomplexes and disjoint unions."""
    sphere = boundary_simplex(3)
    part = subcomplex(sphere, [0, 1])
    assert len(part.vertices) == 4
    union = disjoint_union(sphere, sphere)
    assert len(union.vertices) == 8
    assert len(union.facets) == 8
    with pytest.raises(ValueError):
        disjoint_union(sphere, boundary_simplex(4))
