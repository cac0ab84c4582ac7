"""Bundled triangulations used by the examples and tests.

Every fixture is generated from a short rule rather than stored as data.
"""
import itertools
import logging
import re
from typing import Callable, Dict, List, Tuple

from .complex import NotOrientable, complex_from_facets, disjoint_union, orient
from .errors import PreconditionError, UnknownNameError
from .models import OrientedComplex, SimpComplex

logger = logging.getLogger(__name__)


def boundary_simplex(k: int) -> SimpComplex:
    """The boundary of the k-simplex, a (k-1)-sphere on k+1 vertices."""
    if k < 1:
        raise ValueError("the boundary of a simplex needs k >= 1")
    return complex_from_facets(itertools.combinations(range(k + 1), k))


def simplex(k: int) -> SimpComplex:
    return complex_from_facets([range(k + 1)])


def torus7() -> SimpComplex:
    """Seven-vertex torus: {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    facets = []
    for i in range(7):
        facets.append((i, (i + 1) % 7, (i + 3) % 7))
        facets.append((i, (i + 2) % 7, (i + 3) % 7))
    return complex_from_facets(facets)


def _grid(flip: bool) -> List[Tuple[int, int, int]]:
    """Two triangles per square of the 3x3 grid.

    ``flip`` glues the last row back onto the first with the columns reversed.
    """

    def vertex(i: int, j: int) -> int:
        if i == 3:
            i, j = 0, (-j if flip else j)
        return 3 * i + j % 3

    facets = []
    for i in range(3):
        for j in range(3):
            a, b = vertex(i, j), vertex(i, j + 1)
            c, d = vertex(i + 1, j), vertex(i + 1, j + 1)
            facets.append((a, c, d))
            facets.append((a, b, d))
    return facets


def torus9() -> SimpComplex:
    return complex_from_facets(_grid(flip=False))


def klein9() -> SimpComplex:
    """Klein bottle: the torus grid with the row wrap reversing the columns."""
    return complex_from_facets(_grid(flip=True))


def cone_torus() -> SimpComplex:
    """Cone over torus9; the apex (vertex 9) has a torus as its link."""
    apex = 9
    return complex_from_facets(facet + (apex,) for facet in torus9().facets)


def double_torus() -> SimpComplex:
    """Connected sum of two copies of torus7 along the triangle {0, 1, 3}."""
    glued = (0, 1, 3)
    rename = {0: 0, 1: 1, 3: 3, 2: 7, 4: 8, 5: 9, 6: 10}
    first = [f for f in torus7().facets if f != glued]
    second = [tuple(rename[v] for v in f) for f in torus7().facets if f != glued]
    return complex_from_facets(first + second)


def two_spheres() -> SimpComplex:
    return disjoint_union(boundary_simplex(3), boundary_simplex(3))


_FIXED: Dict[str, Callable[[], SimpComplex]] = {
    "torus7": torus7,
    "torus9": torus9,
    "klein9": klein9,
    "cone-torus": cone_torus,
    "double-torus": double_torus,
    "two-spheres": two_spheres,
}

_PATTERNS: List[Tuple[str, str, Callable[..., SimpComplex]]] = [
    (
        r"boundary-simplex-(\d+)",
        "boundary-simplex-<k>",
        lambda k: boundary_simplex(int(k)),
    ),
    (r"simplex-(\d+)", "simplex-<k>", lambda k: simplex(int(k))),
]


def available_fixtures() -> List[str]:
    return list(_FIXED) + [shown for _, shown, _ in _PATTERNS]


def fixture(name: str) -> SimpComplex:
    """Look up a bundled triangulation by name."""
    key = name.strip().lower()
    if key in _FIXED:
        return _FIXED[key]()
    for pattern, _, factory in _PATTERNS:
        match = re.fullmatch(pattern, key)
        if match:
            return factory(*match.groups())
    raise UnknownNameError("fixture", name, available_fixtures())


def oriented_fixture(name: str) -> OrientedComplex:
    """A bundled triangulation with the orientation found by propagation."""
    result = orient(fixture(name))
    if isinstance(result, NotOrientable):
        raise PreconditionError(
            f"fixture '{name}' is not orientable (conflict across ridge {result.ridge})"
        )
    logger.debug("oriented fixture %s", name)
    return result
