"""Level-wise free completion of an oriented triangulation into a quasigroup.

Level 0 holds one element per vertex and per facet, with f_0 sending the first
n entries of each oriented facet tuple to the facet. Each step adjoins a
product element for every undefined alt_n-orbit of n-tuples and a division
element for every unsolved equation f(x, a_2..a_n) = b, so equations over A_i
are uniquely solvable in A_{i+1}.

Elements are integer ids. Ids grow with birth level, and within a level the
products precede the divisions; canonical keys are lexicographically least
alt_n images under this id order.
"""
import itertools
import logging
from enum import Enum
from typing import Dict, Iterator, List, Optional, Set, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .complex import check_pseudomanifold, orientation_class
from .config import DEFAULT_LIMITS, EngineLimits
from .errors import (
    CompletionCapError,
    ClassificationError,
    InternalConsistencyError,
    OrientationError,
    PreconditionError,
)
from .models import OrientedComplex, SimpComplex, Vertex, VertexTag
from .quasigroup import alternating_group, orbit, orbit_representative
from .topology import components, serenation_report, surface_genus

logger = logging.getLogger(__name__)

Key = Tuple[int, ...]


class ElementKind(str, Enum):
    BASE = "base"
    FACET = "fct"
    PRODUCT = "prod"
    DIVISION = "div"


class DivisionSide(str, Enum):
    """Which argument a division element solves for; binary tables need two."""
    ANY = "any"
    LEFT = "left"
    RIGHT = "right"


class FreeElement(BaseModel):
    """A symbolic element of the completion."""

    model_config = ConfigDict(frozen=True)

    id: int
    kind: ElementKind
    level: int
    vertex: Optional[int] = None
    facet: Optional[int] = None
    # Product: the canonical n-tuple. Division: the fixed arguments of the pattern.
    args: Tuple[int, ...] = ()
    target: Optional[int] = None
    side: Optional[DivisionSide] = None


class CompletionState(BaseModel):
    """A_i with the partial operation f_i.

    ``op`` maps canonical orbit keys to values and ``born`` records the level
    at which each key entered the domain. ``sizes[l]`` is |A_l|.
    """

    model_config = ConfigDict(frozen=True)

    arity: int
    level: int
    vertex_count: int
    facet_count: int
    elements: Tuple[FreeElement, ...]
    op: Dict[Key, int]
    born: Dict[Key, int]
    sizes: Tuple[int, ...]

    def summary(self) -> "LevelSummary":
        kinds = {kind.value: 0 for kind in ElementKind}
        for element in self.elements:
            kinds[element.kind.value] += 1
        return LevelSummary(
            level=self.level,
            elements=len(self.elements),
            by_kind=kinds,
            domain_orbits=len(self.op),
            domain_tuples=domain_size(self),
        )


class LevelSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    level: int
    elements: int
    by_kind: Dict[str, int]
    domain_orbits: int
    domain_tuples: int


class LevelCensus(BaseModel):
    """Burnside projection of the next level before it is built."""

    model_config = ConfigDict(frozen=True)

    level: int
    current_size: int
    product_orbits: int
    defined_orbits: int
    new_products: int
    patterns: int
    solved: int
    new_divisions: int
    projected_size: int


class StateAudit(BaseModel):
    """Outcome of a full invariant audit of a completion state."""

    model_config = ConfigDict(frozen=True)

    level: int
    ok: bool
    checked_tuples: int
    checked_equations: int
    violations: Tuple[str, ...] = ()


class SpotCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    level: int
    equations_checked: int
    failures: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures


class SerenityReport(BaseModel):
    """Comparison of the level-0 simplicization with the subdivision of the input."""

    model_config = ConfigDict(frozen=True)

    facets_match: bool
    facet_count: int
    vertex_count: int
    first_divergence: Optional[str] = None
    level0_orbits: int
    noncommuting_level0: int
    components: int
    euler_characteristic: int
    z2_betti: Tuple[int, ...]
    orientable: Optional[bool] = None
    genus: Optional[int] = None
    invariants_match: bool

    @property
    def ok(self) -> bool:
        return self.facets_match and self.invariants_match and self.components == 1


def canon(t: Key) -> Key:
    return orbit_representative(t)


def _cycle_count(p: Tuple[int, ...]) -> int:
    seen = [False] * len(p)
    count = 0
    for start in range(len(p)):
        if not seen[start]:
            count += 1
            i = start
            while not seen[i]:
                seen[i] = True
                i = p[i]
    return count


def orbit_count(size: int, k: int) -> int:
    """Number of alt_k-orbits on k-tuples over a set of the given size."""
    if k == 0:
        return 1
    group = alternating_group(k)
    return sum(size ** _cycle_count(p) for p in group) // len(group)


def domain_size(state: CompletionState) -> int:
    """Ordered tuples in the domain of f_i."""
    return sum(len(orbit(key)) for key in state.op)


def defined_tuples(state: CompletionState) -> Iterator[Tuple[Key, int]]:
    for key, value in state.op.items():
        for t in orbit(key):
            yield t, value


def seed(gamma: OrientedComplex) -> CompletionState:
    """A_0 = vertices and facets; f_0 sends oriented facet prefixes to the facet."""
    c = gamma.base
    if not c.facets:
        raise PreconditionError("triangulation has no facets")
    check = check_pseudomanifold(c)
    if not check.ok:
        raise PreconditionError(
            f"not a pseudomanifold: ridge {check.violations[0]} is not in two facets"
        )
    n = c.dim
    vertex_count, facet_count = len(c.vertices), len(c.facets)
    claims: Dict[Key, int] = {}
    for position in range(facet_count):
        for ordered in orientation_class(gamma, position):
            prefix = tuple(ordered[:n])
            owner = claims.setdefault(prefix, position)
            if owner != position:
                ridge = tuple(sorted(prefix))
                raise OrientationError(
                    ridge,
                    f"facets {owner} and {position} both claim {prefix}; "
                    f"orientation is incoherent across ridge {ridge}",
                )

    op: Dict[Key, int] = {}
    for prefix, position in claims.items():
        op.setdefault(canon(prefix), vertex_count + position)
    elements = tuple(
        FreeElement.model_construct(id=v, kind=ElementKind.BASE, level=0, vertex=v)
        for v in range(vertex_count)
    ) + tuple(
        FreeElement.model_construct(
            id=vertex_count + j, kind=ElementKind.FACET, level=0, facet=j
        )
        for j in range(facet_count)
    )
    if len(components(c)) > 1:
        logger.warning("triangulation is disconnected; every component is completed")
    logger.info(
        "seeded A_0 with %d elements and %d defined tuples", len(elements), len(claims)
    )
    return CompletionState.model_construct(
        arity=n,
        level=0,
        vertex_count=vertex_count,
        facet_count=facet_count,
        elements=elements,
        op=op,
        born={key: 0 for key in op},
        sizes=(len(elements),),
    )


def _pattern(rest: Key) -> Key:
    """Canonical fixed arguments of an equation with the unknown in front."""
    return orbit_representative(rest)


def equation_pattern(n: int, p: int, rest: Key) -> Tuple[DivisionSide, Key]:
    """Side and pattern of f(..x at position p..) = b with the given other arguments."""
    if n == 2:
        return (DivisionSide.LEFT if p == 0 else DivisionSide.RIGHT), tuple(rest)
    marked = rest[:p] + (-1,) + rest[p:]
    for perm in alternating_group(n):
        if marked[perm[0]] == -1:
            return DivisionSide.ANY, _pattern(tuple(marked[i] for i in perm[1:]))
    raise InternalConsistencyError(f"no even permutation moves position {p} first")


def _solved(state: CompletionState) -> Set[Tuple[DivisionSide, Key, int]]:
    """(side, pattern, target) triples already solvable in A_i."""
    solved: Set[Tuple[DivisionSide, Key, int]] = set()
    binary = state.arity == 2
    for t, value in defined_tuples(state):
        if binary:
            solved.add((DivisionSide.LEFT, (t[1],), value))
            solved.add((DivisionSide.RIGHT, (t[0],), value))
        else:
            solved.add((DivisionSide.ANY, _pattern(t[1:]), value))
    return solved


def _patterns(state: CompletionState) -> Iterator[Tuple[DivisionSide, Key]]:
    size = len(state.elements)
    n = state.arity
    if n == 2:
        for side in (DivisionSide.LEFT, DivisionSide.RIGHT):
            for a in range(size):
                yield side, (a,)
        return
    for rest in itertools.product(range(size), repeat=n - 1):
        if rest == _pattern(rest):
            yield DivisionSide.ANY, rest


def census(state: CompletionState) -> LevelCensus:
    """Projected element counts of the next level."""
    size = len(state.elements)
    n = state.arity
    product_orbits = orbit_count(size, n)
    new_products = product_orbits - len(state.op)
    patterns = 2 * size if n == 2 else orbit_count(size, n - 1)
    solved = len(_solved(state))
    new_divisions = patterns * size - solved
    return LevelCensus(
        level=state.level + 1,
        current_size=size,
        product_orbits=product_orbits,
        defined_orbits=len(state.op),
        new_products=new_products,
        patterns=patterns,
        solved=solved,
        new_divisions=new_divisions,
        projected_size=size + new_products + new_divisions,
    )


def _division_key(side: DivisionSide, d: int, pattern: Key) -> Key:
    if side is DivisionSide.RIGHT:
        return canon(pattern + (d,))
    return canon((d,) + pattern)


def step(
    state: CompletionState,
    limits: EngineLimits = DEFAULT_LIMITS,
    verify: bool = True,
) -> CompletionState:
    """Build A_{i+1} and f_{i+1} from A_i and f_i."""
    projection = census(state)
    if projection.projected_size > limits.free_completion_element_cap:
        raise CompletionCapError(
            projection.projected_size, limits.free_completion_element_cap
        )
    n = state.arity
    size = len(state.elements)
    level = state.level + 1
    op = dict(state.op)
    born = dict(state.born)
    elements: List[FreeElement] = list(state.elements)

    for t in itertools.product(range(size), repeat=n):
        if t in op or t != canon(t):
            continue
        new_id = len(elements)
        elements.append(
            FreeElement.model_construct(
                id=new_id, kind=ElementKind.PRODUCT, level=level, args=t
            )
        )
        op[t] = new_id
        born[t] = level

    solved = _solved(state)
    for side, pattern in _patterns(state):
        for target in range(size):
            if (side, pattern, target) in solved:
                continue
            new_id = len(elements)
            elements.append(
                FreeElement.model_construct(
                    id=new_id,
                    kind=ElementKind.DIVISION,
                    level=level,
                    args=pattern,
                    target=target,
                    side=side,
                )
            )
            key = _division_key(side, new_id, pattern)
            op[key] = target
            born[key] = level

    new_state = CompletionState.model_construct(
        arity=n,
        level=level,
        vertex_count=state.vertex_count,
        facet_count=state.facet_count,
        elements=tuple(elements),
        op=op,
        born=born,
        sizes=state.sizes + (len(elements),),
    )
    logger.info(
        "level %d: %d elements (%d products, %d divisions), %d defined orbits",
        level,
        len(elements),
        projection.new_products,
        projection.new_divisions,
        len(op),
    )
    if len(elements) != projection.projected_size:
        raise InternalConsistencyError(
            f"census projected {projection.projected_size} elements, "
            f"built {len(elements)}"
        )
    if verify:
        audit = verify_state(new_state, state)
        if not audit.ok:
            raise InternalConsistencyError(
                f"level {level} failed its audit: {'; '.join(audit.violations[:5])}"
            )
    return new_state


def complete(
    gamma: OrientedComplex,
    levels: int,
    limits: EngineLimits = DEFAULT_LIMITS,
    verify: bool = True,
) -> List[CompletionState]:
    """Seed and step ``levels`` times; returns every state from level 0."""
    states = [seed(gamma)]
    for _ in range(levels):
        states.append(step(states[-1], limits, verify))
    return states


def _latin_index(
    state: CompletionState, violations: List[str]
) -> Dict[Tuple[int, Key, int], int]:
    """(position, other arguments, value) -> the argument at that position."""
    index: Dict[Tuple[int, Key, int], int] = {}
    for t, value in defined_tuples(state):
        for p in range(state.arity):
            slot = (p, t[:p] + t[p + 1 :], value)
            existing = index.setdefault(slot, t[p])
            if existing != t[p] and len(violations) < 20:
                violations.append(
                    f"f{t} = {value} and position {p} also solved by {existing}"
                )
    return index


def verify_state(
    state: CompletionState, previous: Optional[CompletionState] = None
) -> StateAudit:
    """Audit canonical keys, the partial Latin property, extension and births."""
    violations: List[str] = []
    size = len(state.elements)
    n = state.arity

    for i, element in enumerate(state.elements):
        if element.id != i:
            violations.append(f"element at position {i} has id {element.id}")
            break

    for key in state.op:
        if key != canon(key):
            violations.append(f"key {key} is not canonical")
        if any(not 0 <= x < size for x in key):
            violations.append(f"key {key} references an unknown element")
    index = _latin_index(state, violations)

    if set(state.born) != set(state.op):
        violations.append("birth levels do not cover the domain")
    levels = [element.level for element in state.elements]
    for key, birth in state.born.items():
        top = max(levels[x] for x in key)
        if birth == 0:
            if any(state.elements[x].kind is not ElementKind.BASE for x in key):
                violations.append(f"level-0 key {key} uses a non-vertex element")
        elif top not in (birth - 1, birth):
            violations.append(f"key {key} born at {birth} has top level {top}")
        elif top == birth:
            newest = [x for x in key if levels[x] == birth]
            if (
                len(newest) != 1
                or state.elements[newest[0]].kind is not ElementKind.DIVISION
            ):
                violations.append(f"key {key} born at {birth} is not a division entry")

    products: Set[Key] = set()
    divisions: Set[Tuple] = set()
    for element in state.elements:
        if element.kind is ElementKind.PRODUCT:
            if element.args in products:
                violations.append(f"product {element.args} appears twice")
            products.add(element.args)
            if element.level != max(levels[x] for x in element.args) + 1:
                violations.append(f"product {element.id} has the wrong birth level")
        elif element.kind is ElementKind.DIVISION:
            signature = (element.side, element.args, element.target)
            if signature in divisions:
                violations.append(f"division {signature} appears twice")
            divisions.add(signature)
            expected = max(levels[x] for x in element.args + (element.target,)) + 1
            if element.level != expected:
                violations.append(f"division {element.id} has the wrong birth level")

    if previous is not None:
        if state.elements[: len(previous.elements)] != previous.elements:
            violations.append("earlier elements changed")
        for key, value in previous.op.items():
            if state.op.get(key) != value:
                violations.append(f"f{key} changed from {value} to {state.op.get(key)}")
                break

    equations = 0
    if state.level >= 1:
        inner = state.sizes[state.level - 1]
        for t in itertools.product(range(inner), repeat=n):
            if canon(t) not in state.op:
                previous_level = state.level - 1
                violations.append(f"f{t} is undefined on A_{previous_level}")
                break
        for rest in itertools.product(range(inner), repeat=n - 1):
            for target in range(inner):
                for p in range(n):
                    equations += 1
                    if (p, rest, target) not in index and len(violations) < 20:
                        violations.append(
                            f"no solution for position {p} of f = {target} with {rest}"
                        )

    return StateAudit(
        level=state.level,
        ok=not violations,
        checked_tuples=sum(len(orbit(key)) for key in state.op),
        checked_equations=equations,
        violations=tuple(violations),
    )


def lazy_value(state: CompletionState, t: Tuple) -> Optional[object]:
    """f_{i+1}(t) without building A_{i+1}.

    Entries of ``t`` are element ids of A_i or symbolic next-level elements:
    ``("prod", key)`` or ``("div", side, pattern, target)``. Returns an id, a
    symbolic product, or None when f_{i+1} is undefined at t.
    """
    symbolic = [i for i, x in enumerate(t) if not isinstance(x, int)]
    if not symbolic:
        key = canon(tuple(t))
        if key in state.op:
            return state.op[key]
        return ("prod", key)
    if len(symbolic) != 1 or t[symbolic[0]][0] != "div":
        return None
    _, side, pattern, target = t[symbolic[0]]
    p = symbolic[0]
    rest = tuple(t[:p]) + tuple(t[p + 1 :])
    if state.arity == 2:
        expected_position = 0 if side is DivisionSide.LEFT else 1
        return target if p == expected_position and rest == pattern else None
    # Rotate the unknown to the front with an even permutation.
    for perm in alternating_group(state.arity):
        image = tuple(t[i] for i in perm)
        if image[0] == t[p] and _pattern(image[1:]) == pattern:
            return target
    return None


def spot_check(
    state: CompletionState,
    samples: int = DEFAULT_LIMITS.spot_check_samples,
    seed: Optional[int] = None,
) -> SpotCheck:
    """Sample equations over A_i and check unique solvability in A_{i+1}.

    An equation solved in A_i must evaluate back to its target and must not also
    get a division element; an unsolved one must get exactly one.
    """
    rng = np.random.default_rng(seed)
    size = len(state.elements)
    n = state.arity
    failures: List[str] = []
    index = _latin_index(state, failures)
    solved = _solved(state)

    for _ in range(samples):
        p = int(rng.integers(n))
        rest = tuple(int(x) for x in rng.integers(size, size=n - 1))
        target = int(rng.integers(size))
        solutions = 0
        known = index.get((p, rest, target))
        if known is not None:
            if lazy_value(state, rest[:p] + (known,) + rest[p:]) == target:
                solutions += 1
            else:
                failures.append(f"position {p} of f = {target} with {rest} is stale")
        side, pattern = equation_pattern(n, p, rest)
        if (side, pattern, target) not in solved:
            candidate = ("div", side, pattern, target)
            if lazy_value(state, rest[:p] + (candidate,) + rest[p:]) == target:
                solutions += 1
        if solutions != 1:
            failures.append(
                f"position {p} of f = {target} with {rest} has {solutions} solutions"
            )

    return SpotCheck(
        level=state.level + 1,
        equations_checked=samples,
        failures=tuple(failures),
    )


def subdivide(c: SimpComplex) -> SimpComplex:
    """Cone each facet's ridges to a new facet vertex: (facet - {s}) + {facet}."""
    count = len(c.vertices)
    vertices = tuple(
        Vertex(tag=VertexTag.INPUT, element=i, label=v.label)
        for i, v in enumerate(c.vertices)
    ) + tuple(
        Vertex(tag=VertexTag.OUTPUT, element=count + j, label=f"F{j}")
        for j in range(len(c.facets))
    )
    facets = sorted(
        tuple(sorted(set(facet) - {s})) + (count + j,)
        for j, facet in enumerate(c.facets)
        for s in facet
    )
    return SimpComplex(dim=c.dim, vertices=vertices, facets=tuple(facets))


def level0_facets(state: CompletionState) -> Set[Key]:
    """Facets {t_1..t_n, f_0(t)} of the level-0 noncommuting products."""
    return {
        tuple(sorted(key + (value,)))
        for key, value in state.op.items()
        if state.born[key] == 0
    }


def level0_complex(state: CompletionState, c: SimpComplex) -> SimpComplex:
    """The level-0 facets on the vertices of the subdivision of c."""
    subdivided = subdivide(c)
    facets = tuple(sorted(level0_facets(state)))
    return SimpComplex(dim=c.dim, vertices=subdivided.vertices, facets=facets)


def verify_serene(gamma: OrientedComplex, state: CompletionState) -> SerenityReport:
    """Compare the level-0 simplicization with the subdivision of gamma."""
    c = gamma.base
    expected = subdivide(c)
    level0 = [(key, value) for key, value in state.op.items() if state.born[key] == 0]

    noncommuting = 0
    for key, value in level0:
        if len(key) < 2:
            continue
        swapped = (key[1], key[0]) + key[2:]
        other = state.op.get(canon(swapped))
        if other is not None and other != value:
            noncommuting += 1

    wanted = set(expected.facets)
    got = level0_facets(state)
    divergence = None
    if wanted != got:
        extra = sorted(got - wanted)
        missing = sorted(wanted - got)
        facet, status = (missing[0], "missing") if missing else (extra[0], "extra")
        names = ", ".join(expected.vertices[v].plain() for v in facet)
        divergence = f"facet {{{names}}} is {status}"

    subdivided = serenation_report(expected)
    original = serenation_report(c)
    first = subdivided.components[0]
    genus = None
    if c.dim == 2:
        try:
            genus = surface_genus(first)
        except ClassificationError:
            genus = None
    invariants_match = len(original.components) == len(subdivided.components) and all(
        (a.euler_characteristic, a.z2_betti, a.orientable)
        == (b.euler_characteristic, b.z2_betti, b.orientable)
        for a, b in zip(original.components, subdivided.components)
    )
    return SerenityReport(
        facets_match=divergence is None,
        facet_count=len(got),
        vertex_count=len(expected.vertices),
        first_divergence=divergence,
        level0_orbits=len(level0),
        noncommuting_level0=noncommuting,
        components=len(subdivided.components),
        euler_characteristic=first.euler_characteristic,
        z2_betti=first.z2_betti,
        orientable=first.orientable,
        genus=genus,
        invariants_match=invariants_match,
    )


def describe(state: CompletionState, element_id: int, depth: int = 3) -> str:
    """Readable form of an element, truncated below ``depth``."""
    element = state.elements[element_id]
    if element.kind is ElementKind.BASE:
        return f"v{element.vertex}"
    if element.kind is ElementKind.FACET:
        return f"F{element.facet}"
    if depth == 0:
        return f"#{element_id}"
    parts = [describe(state, x, depth - 1) for x in element.args]
    if element.kind is ElementKind.PRODUCT:
        return "(" + "*".join(parts) + ")"
    target = describe(state, element.target, depth - 1)
    if element.side is DivisionSide.RIGHT:
        return f"({','.join(parts)},x={target})"
    return f"(x,{','.join(parts)}={target})"
