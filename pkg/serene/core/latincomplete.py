"""Partial alternating Latin cubes and a backtracking completion search.

The search assigns one value per cell. With symmetry reduction a cell is an
alt_n-orbit of argument tuples, so every completed table is alternating by
construction; without it a cell is a single tuple whose orbit mates must take
the same value. Domains are bitmasks derived from the lines through a cell's
tuples and the next cell is the one with the fewest remaining values.
"""
import itertools
import logging
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from . import freecomplete
from .complex import simplicize, vertex_index
from .config import SearchSettings
from .errors import (
    ClassificationError,
    InternalConsistencyError,
    PreconditionError,
)
from .freecomplete import CompletionState, defined_tuples, subdivide
from .models import OperationTable, OrientedComplex, PartialCube
from .quasigroup import alternating_group, orbit_representative, validate
from .topology import serenation_report, surface_genus

logger = logging.getLogger(__name__)

Entry = Tuple[int, ...]


class Violation(BaseModel):
    """Two entries that break one clause of the partial cube definition."""

    model_config = ConfigDict(frozen=True)

    clause: str
    role: Optional[int] = None
    entries: Tuple[Entry, Entry]


class PartialCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    ok: bool
    violations: Tuple[Violation, ...] = ()


class OrderAttempt(BaseModel):
    """One search at a fixed carrier size.

    ``outcome`` is found, exhausted (no completion at this order), budget
    (search stopped, nothing proved) or contradiction (the orbit closure of
    the entries already breaks a line).
    """

    model_config = ConfigDict(frozen=True)

    order: int
    outcome: str
    nodes: int
    cells: int
    preassigned: int


class CompletionResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    found: bool
    table: Optional[OperationTable] = None
    attempts: Tuple[OrderAttempt, ...] = ()
    reduce_symmetry: bool = True

    @property
    def nodes(self) -> int:
        return sum(attempt.nodes for attempt in self.attempts)


class ProbeResult(BaseModel):
    """Latin completion of a seeded triangulation and the component it yields."""

    model_config = ConfigDict(frozen=True)

    arity: int
    seed_entries: int
    seed_order: int
    completion: CompletionResult
    components: int = 0
    matched_component: Optional[int] = None
    exact_component: bool = False
    euler_characteristic: Optional[int] = None
    genus: Optional[int] = None


def check_partial(p: PartialCube) -> PartialCheck:
    """Partial Latin in every role, including the output, and alternating."""
    n = p.arity
    violations: List[Violation] = []
    entries = sorted(p.entries)

    for role in range(n + 1):
        seen: Dict[Entry, Entry] = {}
        for entry in entries:
            rest = entry[:role] + entry[role + 1:]
            other = seen.setdefault(rest, entry)
            if other != entry:
                violations.append(
                    Violation(clause="latin", role=role, entries=(other, entry))
                )

    by_orbit: Dict[Entry, Entry] = {}
    for entry in entries:
        rep = orbit_representative(entry[:n])
        other = by_orbit.setdefault(rep, entry)
        if other[n] != entry[n]:
            violations.append(Violation(clause="alternating", entries=(other, entry)))

    return PartialCheck(ok=not violations, violations=tuple(violations))


class _Layout:
    """Cells and lines of the order-m, arity-n cube."""

    def __init__(self, n: int, m: int, reduce_symmetry: bool):
        self.arity = n
        self.order = m
        coords = np.indices((m,) * n).reshape(n, -1).T
        size = len(coords)
        radix = m ** np.arange(n - 1, -1, -1)

        line_ids = np.empty((size, n), dtype=np.int64)
        for axis in range(n):
            others = np.delete(coords, axis, axis=1)
            weights = m ** np.arange(n - 2, -1, -1)
            line_ids[:, axis] = axis * m ** (n - 1) + others @ weights
        self.line_count = n * m ** (n - 1)

        images = np.stack(
            [coords[:, list(p)] @ radix for p in alternating_group(n)], axis=1
        )
        least = images.min(axis=1)

        if reduce_symmetry:
            reps, cell_of = np.unique(least, return_inverse=True)
            self.cell_of = cell_of.ravel().tolist()
            members: List[List[int]] = [[] for _ in reps]
            for t, cell in enumerate(self.cell_of):
                members[cell].append(t)
            self.mates: List[List[int]] = [[] for _ in reps]
        else:
            self.cell_of = list(range(size))
            members = [[t] for t in range(size)]
            by_orbit: Dict[int, List[int]] = {}
            for t, rep in enumerate(least.tolist()):
                by_orbit.setdefault(rep, []).append(t)
            self.mates = [
                [u for u in by_orbit[rep] if u != t]
                for t, rep in enumerate(least.tolist())
            ]
        self.members = members
        self.cell_lines = [
            [int(line) for t in tuples for line in line_ids[t]] for tuples in members
        ]

    @property
    def cells(self) -> int:
        return len(self.members)

    def flat(self, args: Entry) -> int:
        index = 0
        for x in args:
            index = index * self.order + x
        return index


@lru_cache(maxsize=16)
def _layout(n: int, m: int, reduce_symmetry: bool) -> _Layout:
    return _Layout(n, m, reduce_symmetry)


class _CubeSearch:
    """Iterative depth-first search with forward checking over cell domains."""

    def __init__(
        self,
        layout: _Layout,
        budget: int,
        rng: Optional[np.random.Generator] = None,
    ):
        self.layout = layout
        self.budget = budget
        self.rng = rng
        self.full = (1 << layout.order) - 1
        self.used = [0] * layout.line_count
        self.values = [-1] * layout.cells
        self.nodes = 0

    def domain(self, cell: int) -> int:
        mask = self.full
        for line in self.layout.cell_lines[cell]:
            mask &= ~self.used[line]
        for mate in self.layout.mates[cell]:
            if self.values[mate] >= 0:
                mask &= 1 << self.values[mate]
        return mask

    def assign(self, cell: int, value: int) -> None:
        bit = 1 << value
        for line in self.layout.cell_lines[cell]:
            self.used[line] |= bit
        self.values[cell] = value

    def unassign(self, cell: int) -> None:
        clear = ~(1 << self.values[cell])
        for line in self.layout.cell_lines[cell]:
            self.used[line] &= clear
        self.values[cell] = -1

    def select(self) -> Tuple[Optional[int], int]:
        """Open cell with the fewest values; ties go to the least cell."""
        best, best_mask, best_size = None, 0, self.layout.order + 1
        for cell, value in enumerate(self.values):
            if value >= 0:
                continue
            mask = self.domain(cell)
            size = mask.bit_count()
            if size < best_size:
                best, best_mask, best_size = cell, mask, size
                if size <= 1:
                    break
        return best, best_mask

    def options(self, mask: int) -> List[int]:
        values = [v for v in range(self.layout.order) if mask >> v & 1]
        if self.rng is not None and len(values) > 1:
            values = [values[i] for i in self.rng.permutation(len(values))]
        return values

    def preassign(self, fixed: Dict[int, int]) -> bool:
        for cell, value in sorted(fixed.items()):
            if not self.domain(cell) >> value & 1:
                return False
            self.assign(cell, value)
        return True

    def run(self) -> str:
        frames: List[Tuple[int, List[int]]] = []
        while True:
            cell, mask = self.select()
            if cell is None:
                return "found"
            frames.append((cell, self.options(mask)))
            # Advance the deepest frame that still has values to try.
            while frames:
                cell, remaining = frames[-1]
                if self.values[cell] >= 0:
                    self.unassign(cell)
                if remaining:
                    self.nodes += 1
                    if self.nodes > self.budget:
                        return "budget"
                    self.assign(cell, remaining.pop(0))
                    break
                frames.pop()
            else:
                return "exhausted"


def _fixed_cells(layout: _Layout, p: PartialCube) -> Optional[Dict[int, int]]:
    n = p.arity
    fixed: Dict[int, int] = {}
    for entry in sorted(p.entries):
        cell = layout.cell_of[layout.flat(entry[:n])]
        if fixed.setdefault(cell, entry[n]) != entry[n]:
            return None
    return fixed


def _attempt(
    p: PartialCube,
    m: int,
    budget: int,
    seed_value: Optional[int],
    reduce_symmetry: bool,
) -> Tuple[OrderAttempt, Optional[OperationTable]]:
    layout = _layout(p.arity, m, reduce_symmetry)
    rng = np.random.default_rng(seed_value) if seed_value is not None else None
    search = _CubeSearch(layout, budget, rng)
    fixed = _fixed_cells(layout, p)
    if fixed is None or not search.preassign(fixed):
        outcome = "contradiction"
    else:
        outcome = search.run()
    attempt = OrderAttempt(
        order=m,
        outcome=outcome,
        nodes=search.nodes,
        cells=layout.cells,
        preassigned=len(fixed or {}),
    )
    if outcome != "found":
        return attempt, None

    flat = [search.values[cell] for cell in layout.cell_of]
    cube = np.asarray(flat, dtype=np.int64).reshape((m,) * p.arity)
    return attempt, OperationTable.from_cube(cube, [str(i) for i in range(m)])


def complete(
    p: PartialCube,
    max_order: Optional[int] = None,
    budget: int = 10_000_000,
    seed: Optional[int] = None,
    reduce_symmetry: bool = True,
) -> CompletionResult:
    """Search for an alternating quasigroup containing p at orders m..max_order.

    Each order restarts the search. ``budget`` bounds decision nodes per
    order; a budget stop proves nothing about that order.
    """
    check = check_partial(p)
    if not check.ok:
        first = check.violations[0]
        raise PreconditionError(
            f"partial cube violates the {first.clause} clause at "
            f"{first.entries[0]} and {first.entries[1]}"
        )
    max_order = p.order if max_order is None else max_order
    if max_order < p.order:
        raise ValueError(f"max_order {max_order} is below the order {p.order}")

    attempts: List[OrderAttempt] = []
    for m in range(p.order, max_order + 1):
        attempt, table = _attempt(p, m, budget, seed, reduce_symmetry)
        attempts.append(attempt)
        logger.info(
            "order %d: %s after %d nodes over %d cells",
            m, attempt.outcome, attempt.nodes, attempt.cells,
        )
        if table is None:
            continue
        cert = validate(table)
        if not (cert.latin and cert.alternating):
            raise InternalConsistencyError(
                f"completion at order {m} is not an alternating quasigroup"
            )
        missing = [e for e in sorted(p.entries) if table.value(e[:-1]) != e[-1]]
        if missing:
            raise InternalConsistencyError(f"completion drops entry {missing[0]}")
        return CompletionResult(
            found=True,
            table=table,
            attempts=tuple(attempts),
            reduce_symmetry=reduce_symmetry,
        )
    return CompletionResult(
        found=False, attempts=tuple(attempts), reduce_symmetry=reduce_symmetry
    )


def complete_with(p: PartialCube, settings: SearchSettings) -> CompletionResult:
    return complete(p, **settings.model_dump())


def partial_from_state(state: CompletionState) -> PartialCube:
    """Every defined tuple of f_i as an entry over the element ids of A_i."""
    return PartialCube(
        arity=state.arity,
        order=len(state.elements),
        entries=frozenset(t + (value,) for t, value in defined_tuples(state)),
    )


def evans_instances(m: int, max_entries: int) -> Iterator[PartialCube]:
    """All partial Latin squares of order m with at most max_entries entries."""
    cells = list(itertools.product(range(m), repeat=2))
    for k in range(max_entries + 1):
        for chosen in itertools.combinations(cells, k):
            for values in itertools.product(range(m), repeat=k):
                entries = [cell + (v,) for cell, v in zip(chosen, values)]
                if _is_partial_latin(entries):
                    yield PartialCube(arity=2, order=m, entries=frozenset(entries))


def random_evans_instance(m: int, rng: np.random.Generator) -> PartialCube:
    """A random partial Latin square of order m with fewer than m entries."""
    target = int(rng.integers(m))
    entries: List[Entry] = []
    while len(entries) < target:
        entry = tuple(int(x) for x in rng.integers(m, size=3))
        if _is_partial_latin(entries + [entry]):
            entries.append(entry)
    return PartialCube(arity=2, order=m, entries=frozenset(entries))


def _is_partial_latin(entries: List[Entry]) -> bool:
    for role in range(3):
        rests = [e[:role] + e[role + 1:] for e in entries]
        if len(set(rests)) != len(rests):
            return False
    return True


def quasifinite_probe(
    gamma: OrientedComplex,
    max_order: Optional[int] = None,
    budget: int = 10_000_000,
    seed: Optional[int] = None,
) -> ProbeResult:
    """Seed the free completion, complete the seed as a Latin cube and
    look for the subdivided triangulation among the serenation components."""
    state = freecomplete.seed(gamma)
    partial = partial_from_state(state)
    result = complete(partial, max_order=max_order, budget=budget, seed=seed)
    probe = dict(
        arity=state.arity,
        seed_entries=len(partial.entries),
        seed_order=partial.order,
        completion=result,
    )
    if not result.found:
        return ProbeResult(**probe)

    table = result.table
    found = simplicize(table)
    index = vertex_index(found)
    expected = subdivide(gamma.base)
    image = set()
    for facet in expected.facets:
        keys = [(expected.vertices[v].tag, expected.vertices[v].element) for v in facet]
        image.add(tuple(sorted(index.get(key, -1) for key in keys)))
    report = serenation_report(found)
    wanted = serenation_report(expected).components[0]
    position = {facet: i for i, facet in enumerate(found.facets)}
    image_positions = {position.get(facet, -1) for facet in image}

    matched, exact = None, False
    for i, summary in enumerate(report.components):
        same_facets = set(summary.facets) == image_positions
        same_invariants = (
            summary.euler_characteristic,
            summary.z2_betti,
            summary.orientable,
        ) == (wanted.euler_characteristic, wanted.z2_betti, wanted.orientable)
        if same_facets or (same_invariants and matched is None):
            matched, exact = i, same_facets
        if same_facets:
            break

    genus = None
    if matched is not None and found.dim == 2:
        try:
            genus = surface_genus(report.components[matched])
        except ClassificationError:
            genus = None
    logger.info(
        "probe: order %d table, %d components, matched %s",
        table.order, len(report.components), matched,
    )
    return ProbeResult(
        **probe,
        components=len(report.components),
        matched_component=matched,
        exact_component=exact,
        euler_characteristic=(
            report.components[matched].euler_characteristic
            if matched is not None else None
        ),
        genus=genus,
    )
