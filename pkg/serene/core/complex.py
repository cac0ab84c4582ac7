"""Simplicization and pure simplicial complex machinery."""
import itertools
import logging
from collections import Counter, defaultdict, deque
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict

from .errors import FaceLookupError, InternalConsistencyError, PreconditionError
from .models import (
    OperationTable,
    OrientedComplex,
    QuasigroupCert,
    SimpComplex,
    Vertex,
    VertexTag,
)
from .quasigroup import (
    HomomorphismCheck,
    alternating_group,
    inp,
    nct_orbits,
    out,
    permutation_parity,
    permute,
    validate,
)

logger = logging.getLogger(__name__)

Face = Tuple[int, ...]


class PseudomanifoldCheck(BaseModel):
    """Ridges that do not lie in exactly two facets."""

    model_config = ConfigDict(frozen=True)

    ok: bool
    violations: Tuple[Face, ...] = ()


class NotOrientable(BaseModel):
    """Orientation propagation met a contradiction.

    ``witness_cycle`` is a closed walk of facet indices through shared ridges
    (the last facet is adjacent to the first) along which the signs cannot agree.
    """

    model_config = ConfigDict(frozen=True)

    witness_cycle: Tuple[int, ...]
    ridge: Face


class LinkResult(BaseModel):
    """Maximal faces of a link, plus the link as a complex when it is one."""

    model_config = ConfigDict(frozen=True)

    face: Face
    pure: bool
    maximal_faces: Tuple[Face, ...]
    complex: Optional[SimpComplex] = None


class SimplicialMap(BaseModel):
    """Vertex map between two simplicizations, carrying facets to facets."""

    model_config = ConfigDict(frozen=True)

    vertex_map: Tuple[int, ...]


def complex_from_facets(
    facets: Iterable[Sequence[int]],
    labels: Optional[Sequence[str]] = None,
    tags: Optional[Sequence[VertexTag]] = None,
) -> SimpComplex:
    """Build a complex on vertices 0..V-1 from facets listed in any vertex order."""
    sorted_facets = [tuple(sorted(facet)) for facet in facets]
    if not sorted_facets:
        raise ValueError("a complex needs at least one facet")
    count = max(max(facet) for facet in sorted_facets) + 1
    labels = labels or [str(v) for v in range(count)]
    tags = tags or [VertexTag.INPUT] * count
    vertices = tuple(
        Vertex(tag=tags[v], element=v, label=labels[v]) for v in range(count)
    )
    return SimpComplex(
        dim=len(sorted_facets[0]) - 1, vertices=vertices, facets=tuple(sorted_facets)
    )


def vertex_index(c: SimpComplex) -> Dict[Tuple[VertexTag, int], int]:
    """Position of each (tag, element) pair in the vertex list."""
    return {(v.tag, v.element): i for i, v in enumerate(c.vertices)}


def simplicize(
    table: OperationTable, cert: Optional[QuasigroupCert] = None
) -> SimpComplex:
    """One facet {a_1..a_n (inputs), f(a) (output)} per alt_n-orbit of nct."""
    cert = cert or validate(table)
    if not (cert.latin and cert.alternating):
        raise PreconditionError(
            "simplicization needs an alternating quasigroup "
            f"(latin={cert.latin}, alternating={cert.alternating})"
        )
    inputs = sorted(inp(table))
    outputs = sorted(out(table))
    vertices = [
        Vertex(tag=VertexTag.INPUT, element=a, label=table.label(a)) for a in inputs
    ] + [Vertex(tag=VertexTag.OUTPUT, element=b, label=table.label(b)) for b in outputs]
    in_position = {a: i for i, a in enumerate(inputs)}
    out_position = {b: len(inputs) + j for j, b in enumerate(outputs)}

    orbits = nct_orbits(table)
    facets = sorted(
        {
            tuple(sorted([in_position[x] for x in rep] + [out_position[value]]))
            for rep, value in orbits
        }
    )
    if len(facets) != len(orbits):
        raise InternalConsistencyError(
            f"{len(orbits)} orbits produced only {len(facets)} distinct facets"
        )
    logger.debug("simplicized %d orbits into %d facets", len(orbits), len(facets))
    return SimpComplex(dim=table.arity, vertices=tuple(vertices), facets=tuple(facets))


def facet_of(c: SimpComplex, table: OperationTable, args: Sequence[int]) -> Face:
    """The facet of a noncommuting tuple."""
    index = vertex_index(c)
    try:
        facet = tuple(
            sorted(
                [index[(VertexTag.INPUT, a)] for a in args]
                + [index[(VertexTag.OUTPUT, table.value(args))]]
            )
        )
    except KeyError:
        raise FaceLookupError(f"{tuple(args)} does not give a facet") from None
    if facet not in set(c.facets):
        raise FaceLookupError(f"{tuple(args)} does not give a facet")
    return facet


def simplicize_map(
    src_table: OperationTable,
    dst_table: OperationTable,
    mapping: Sequence[int],
    check: HomomorphismCheck,
    src: Optional[SimpComplex] = None,
    dst: Optional[SimpComplex] = None,
) -> SimplicialMap:
    """Tag-preserving vertex map a -> h(a) induced by an NC homomorphism."""
    if not check.nc_hom:
        raise PreconditionError("map is not an NC homomorphism")
    src = src or simplicize(src_table)
    dst = dst or simplicize(dst_table)
    target = vertex_index(dst)
    try:
        vertex_map = tuple(
            target[(v.tag, int(mapping[v.element]))] for v in src.vertices
        )
    except KeyError as e:
        raise PreconditionError(f"vertex {e} has no image vertex") from None
    dst_facets = set(dst.facets)
    for position, facet in enumerate(src.facets):
        image = tuple(sorted(vertex_map[v] for v in facet))
        if len(set(image)) != len(image) or image not in dst_facets:
            labels = [src.vertices[v].display() for v in facet]
            raise PreconditionError(
                f"facet {position} {{{', '.join(labels)}}} is not mapped to a facet"
            )
    return SimplicialMap(vertex_map=vertex_map)


def ridges(facet: Face) -> List[Tuple[int, Face]]:
    """(removed position, ridge) pairs of a sorted facet."""
    return [(k, facet[:k] + facet[k + 1 :]) for k in range(len(facet))]


def ridge_incidence(c: SimpComplex) -> Dict[Face, List[Tuple[int, int]]]:
    """Each ridge with the (facet, removed position) pairs containing it."""
    incidence: Dict[Face, List[Tuple[int, int]]] = defaultdict(list)
    for position, facet in enumerate(c.facets):
        for k, ridge in ridges(facet):
            incidence[ridge].append((position, k))
    return incidence


def check_pseudomanifold(c: SimpComplex) -> PseudomanifoldCheck:
    counts = Counter(ridge for facet in c.facets for _, ridge in ridges(facet))
    violations = tuple(sorted(r for r, count in counts.items() if count != 2))
    return PseudomanifoldCheck(ok=not violations, violations=violations)


def _path_to_root(parent: List[Optional[int]], start: int) -> List[int]:
    path = [start]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path


def orient(c: SimpComplex) -> Union[OrientedComplex, NotOrientable]:
    """Propagate facet signs breadth-first across shared ridges."""
    check = check_pseudomanifold(c)
    if not check.ok:
        raise PreconditionError(
            f"not a pseudomanifold: ridge {check.violations[0]} is not in two facets"
        )
    incidence = ridge_incidence(c)
    signs = [0] * len(c.facets)
    parent: List[Optional[int]] = [None] * len(c.facets)

    for root in range(len(c.facets)):
        if signs[root]:
            continue
        signs[root] = 1
        queue = deque([root])
        while queue:
            current = queue.popleft()
            for k, ridge in ridges(c.facets[current]):
                for other, l in incidence[ridge]:
                    if other == current:
                        continue
                    # Induced ridge orientations (-1)^k s must be opposite.
                    required = -((-1) ** (k + l)) * signs[current]
                    if signs[other] == 0:
                        signs[other] = required
                        parent[other] = current
                        queue.append(other)
                    elif signs[other] != required:
                        left = _path_to_root(parent, current)
                        right = _path_to_root(parent, other)
                        common = set(left) & set(right)
                        left = left[: min(left.index(x) for x in common) + 1]
                        apex = left[-1]
                        right = right[: right.index(apex)]
                        cycle = tuple(left + list(reversed(right)))
                        logger.debug("orientation conflict across ridge %s", ridge)
                        return NotOrientable(witness_cycle=cycle, ridge=ridge)
    return OrientedComplex(base=c, orientation=tuple(signs))


def orientation_class(oriented: OrientedComplex, position: int) -> List[Face]:
    """Ordered vertex tuples of a facet's orientation class."""
    facet = oriented.base.facets[position]
    start = facet
    if oriented.orientation[position] < 0:
        start = facet[:-2] + (facet[-1], facet[-2])
    return [permute(start, p) for p in alternating_group(len(facet))]


def oriented_from_ordered(
    c: SimpComplex, ordered_facets: Sequence[Sequence[int]]
) -> OrientedComplex:
    """Orientation whose classes contain the given vertex orders."""
    by_facet = {facet: i for i, facet in enumerate(c.facets)}
    signs = [1] * len(c.facets)
    for ordered in ordered_facets:
        facet = tuple(sorted(ordered))
        if facet not in by_facet:
            raise FaceLookupError(f"{tuple(ordered)} is not a facet")
        order = sorted(range(len(ordered)), key=lambda i: ordered[i])
        signs[by_facet[facet]] = -1 if permutation_parity(order) else 1
    return OrientedComplex(base=c, orientation=tuple(signs))


def faces(c: SimpComplex, k: int) -> List[Face]:
    """All k-faces of the closure, sorted."""
    if not 0 <= k <= c.dim:
        raise ValueError(f"face dimension {k} is outside 0..{c.dim}")
    return sorted(
        {face for facet in c.facets for face in itertools.combinations(facet, k + 1)}
    )


def subcomplex(c: SimpComplex, facet_positions: Iterable[int]) -> SimpComplex:
    """The facets at the given positions, on the vertices they use."""
    chosen = [c.facets[i] for i in sorted(set(facet_positions))]
    used = sorted({v for facet in chosen for v in facet})
    renumber = {v: i for i, v in enumerate(used)}
    return SimpComplex(
        dim=c.dim,
        vertices=tuple(c.vertices[v] for v in used),
        facets=tuple(
            sorted(tuple(renumber[v] for v in facet) for facet in chosen)
        ),
    )


def star(c: SimpComplex, face: Sequence[int]) -> SimpComplex:
    """Facets containing the face."""
    target = set(face)
    positions = [i for i, facet in enumerate(c.facets) if target <= set(facet)]
    if not positions:
        raise FaceLookupError(f"{tuple(face)} is not a face of the complex")
    return subcomplex(c, positions)


def link(c: SimpComplex, face: Sequence[int]) -> LinkResult:
    """Link of a face: {facet minus face : face in facet}, closed downward."""
    face = tuple(sorted(face))
    target = set(face)
    remainders = sorted(
        {
            tuple(v for v in facet if v not in target)
            for facet in c.facets
            if target <= set(facet)
        }
    )
    if not remainders:
        raise FaceLookupError(f"{face} is not a face of the complex")
    maximal = tuple(
        r
        for r in remainders
        if not any(set(r) < set(other) for other in remainders)
    )
    pure = len({len(r) for r in maximal}) == 1
    complex_ = None
    if pure and maximal[0]:
        used = sorted({v for r in maximal for v in r})
        renumber = {v: i for i, v in enumerate(used)}
        complex_ = SimpComplex(
            dim=len(maximal[0]) - 1,
            vertices=tuple(c.vertices[v] for v in used),
            facets=tuple(sorted(tuple(renumber[v] for v in r) for r in maximal)),
        )
    return LinkResult(face=face, pure=pure, maximal_faces=maximal, complex=complex_)


def disjoint_union(first: SimpComplex, second: SimpComplex) -> SimpComplex:
    if first.dim != second.dim:
        raise ValueError("complexes of different dimension")
    shift = len(first.vertices)
    vertices = list(first.vertices) + [
        v.model_copy(update={"element": v.element + shift}) for v in second.vertices
    ]
    facets = list(first.facets) + [
        tuple(v + shift for v in facet) for facet in second.facets
    ]
    return SimpComplex(dim=first.dim, vertices=tuple(vertices), facets=tuple(facets))
