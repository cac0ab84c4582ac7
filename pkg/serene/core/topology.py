"""Components, Euler characteristic, Z/2 homology and the serenation report."""
import itertools
import logging
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from .complex import Face, check_pseudomanifold, link, orient, ridges, subcomplex
from .errors import ClassificationError
from .models import OrientedComplex, SimpComplex

logger = logging.getLogger(__name__)


class LinkFlag(str, Enum):
    """Vertex link classification.

    A sphere-like link is necessary, not sufficient, for a Euclidean neighbourhood.
    """
    SPHERE_LIKE = "sphere_like"
    NON_SPHERE_LIKE = "non_sphere_like"


class ComponentSummary(BaseModel):
    """Invariants of one closed component."""

    model_config = ConfigDict(frozen=True)

    facets: Tuple[int, ...]
    dim: int
    face_counts: Tuple[int, ...]
    euler_characteristic: int
    z2_betti: Tuple[int, ...]
    pseudomanifold: bool
    link_flags: Dict[int, LinkFlag]
    orientable: Optional[bool] = None

    @property
    def all_sphere_like(self) -> bool:
        return all(flag is LinkFlag.SPHERE_LIKE for flag in self.link_flags.values())


class ComponentReport(BaseModel):
    """Per-component invariants; ``facet_partition`` partitions all facets."""

    model_config = ConfigDict(frozen=True)

    dim: int
    facet_partition: Tuple[Tuple[int, ...], ...]
    components: Tuple[ComponentSummary, ...]


def closure_faces(c: SimpComplex) -> List[List[Face]]:
    """Faces of every dimension 0..dim, each list sorted."""
    by_dim: List[set] = [set() for _ in range(c.dim + 1)]
    for facet in c.facets:
        for k in range(c.dim + 1):
            by_dim[k].update(itertools.combinations(facet, k + 1))
    return [sorted(faces) for faces in by_dim]


def face_counts(c: SimpComplex) -> Tuple[int, ...]:
    return tuple(len(faces) for faces in closure_faces(c))


def euler_characteristic(c: SimpComplex) -> int:
    return sum((-1) ** k * count for k, count in enumerate(face_counts(c)))


def _gf2_rank(columns: Sequence[Face], rows: Sequence[Face]) -> int:
    """Rank over GF(2) of the boundary map from ``columns`` to ``rows``."""
    if not columns or not rows:
        return 0
    field = GF(2)
    position = {face: i for i, face in enumerate(rows)}
    entries: Dict[int, Dict[int, object]] = {}
    for j, face in enumerate(columns):
        for _, ridge in ridges(face):
            entries.setdefault(position[ridge], {})[j] = field.one
    matrix = DomainMatrix(entries, (len(rows), len(columns)), field)
    return int(matrix.rank())


def z2_homology(c: SimpComplex) -> Tuple[int, ...]:
    """Betti numbers over the 2-element field, dimensions 0..dim."""
    faces = closure_faces(c)
    ranks = [0] + [_gf2_rank(faces[k], faces[k - 1]) for k in range(1, c.dim + 1)]
    ranks.append(0)
    return tuple(
        len(faces[k]) - ranks[k] - ranks[k + 1] for k in range(c.dim + 1)
    )


def sphere_betti(d: int) -> Tuple[int, ...]:
    """Z/2 betti vector of the d-sphere."""
    if d == 0:
        return (2,)
    return (1,) + (0,) * (d - 1) + (1,)


def components(c: SimpComplex) -> List[Tuple[int, ...]]:
    """Facet sets connected through shared ridges, ordered by least facet index."""
    graph = nx.Graph()
    graph.add_nodes_from(range(len(c.facets)))
    by_ridge: Dict[Face, List[int]] = {}
    for position, facet in enumerate(c.facets):
        for _, ridge in ridges(facet):
            by_ridge.setdefault(ridge, []).append(position)
    for sharing in by_ridge.values():
        graph.add_edges_from(itertools.combinations(sharing, 2))
    parts = [tuple(sorted(part)) for part in nx.connected_components(graph)]
    return sorted(parts)


def _link_flag(c: SimpComplex, vertex: int) -> LinkFlag:
    if c.dim == 0:
        # The link of a point in a 0-manifold is the empty (-1)-sphere.
        return LinkFlag.SPHERE_LIKE
    result = link(c, (vertex,))
    if result.complex is None or not check_pseudomanifold(result.complex).ok:
        return LinkFlag.NON_SPHERE_LIKE
    if z2_homology(result.complex) != sphere_betti(c.dim - 1):
        return LinkFlag.NON_SPHERE_LIKE
    return LinkFlag.SPHERE_LIKE


def summarize(c: SimpComplex, facets: Tuple[int, ...]) -> ComponentSummary:
    """Invariants of the closure of the given facets."""
    part = subcomplex(c, facets)
    counts = face_counts(part)
    pseudomanifold = check_pseudomanifold(part).ok
    orientable = None
    if pseudomanifold:
        orientable = isinstance(orient(part), OrientedComplex)
    # Link flags are keyed by vertex index in the full complex.
    used = sorted({v for i in facets for v in c.facets[i]})
    flags = {v: _link_flag(part, local) for local, v in enumerate(used)}
    return ComponentSummary(
        facets=facets,
        dim=c.dim,
        face_counts=counts,
        euler_characteristic=sum((-1) ** k * n for k, n in enumerate(counts)),
        z2_betti=z2_homology(part),
        pseudomanifold=pseudomanifold,
        orientable=orientable,
        link_flags=flags,
    )


def serenation_report(c: SimpComplex) -> ComponentReport:
    """Closed components with homology, orientability and vertex link tests."""
    partition = components(c)
    summaries = tuple(summarize(c, part) for part in partition)
    logger.info(
        "serenation report: %d components over %d facets", len(partition), len(c.facets)
    )
    return ComponentReport(
        dim=c.dim, facet_partition=tuple(partition), components=summaries
    )


def surface_genus(summary: ComponentSummary) -> int:
    """Genus of a closed orientable surface component, (2 - chi) / 2."""
    if summary.dim != 2:
        raise ClassificationError(f"genus needs a surface, got dimension {summary.dim}")
    if not summary.orientable:
        raise ClassificationError("component is not orientable")
    if not summary.all_sphere_like:
        bad = sorted(
            v for v, flag in summary.link_flags.items()
            if flag is LinkFlag.NON_SPHERE_LIKE
        )
        raise ClassificationError(f"vertex {bad[0]} has a link that is not a circle")
    if summary.euler_characteristic % 2:
        raise ClassificationError(
            f"odd Euler characteristic {summary.euler_characteristic}"
        )
    return (2 - summary.euler_characteristic) // 2
