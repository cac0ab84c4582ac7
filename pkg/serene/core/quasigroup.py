"""Finite n-quasigroups: validation, division, symmetry and homomorphisms."""
import itertools
import logging
from functools import lru_cache
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .config import DEFAULT_LIMITS, EngineLimits
from .errors import PreconditionError, TableError
from .models import OperationTable, QuasigroupCert

logger = logging.getLogger(__name__)

Permutation = Tuple[int, ...]


def permutation_parity(p: Sequence[int]) -> int:
    """0 for even permutations, 1 for odd ones."""
    inversions = sum(
        1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j]
    )
    return inversions % 2


@lru_cache(maxsize=None)
def symmetric_group(n: int) -> Tuple[Permutation, ...]:
    return tuple(itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def alternating_group(n: int) -> Tuple[Permutation, ...]:
    """Even permutations of n positions, identity first."""
    return tuple(p for p in symmetric_group(n) if permutation_parity(p) == 0)


@lru_cache(maxsize=None)
def alternating_generators(n: int) -> Tuple[Permutation, ...]:
    """The 3-cycles (1 2 i), i = 3..n, which generate alt_n."""
    generators = []
    for i in range(2, n):
        p = list(range(n))
        p[0], p[1], p[i] = 1, i, 0
        generators.append(tuple(p))
    return tuple(generators)


def permute(t: Sequence, p: Permutation) -> tuple:
    return tuple(t[i] for i in p)


def orbit(t: Sequence) -> List[tuple]:
    """Sorted distinct images of t under alt_n."""
    return sorted({permute(t, p) for p in alternating_group(len(t))})


def orbit_representative(t: Sequence) -> tuple:
    """Lexicographically least image of t under alt_n."""
    return min(permute(t, p) for p in alternating_group(len(t)))


def _is_invariant(cube: np.ndarray, p: Permutation) -> bool:
    return bool(np.array_equal(cube, cube.transpose(p)))


def line_check(table: OperationTable) -> bool:
    """Latin test on the hypercube: every axis-parallel line is a permutation."""
    cube = table.cube()
    symbols = np.arange(table.order)
    for axis in range(table.arity):
        lines = np.sort(np.moveaxis(cube, axis, -1), axis=-1)
        if not np.array_equal(lines, np.broadcast_to(symbols, lines.shape)):
            return False
    return True


def _unique_solutions(cube: np.ndarray) -> bool:
    """Every equation with one freed argument and a fixed target has one solution."""
    order = cube.shape[0]
    for axis in range(cube.ndim):
        lines = np.moveaxis(cube, axis, -1).reshape(-1, order)
        for y in range(order):
            if not np.all(np.count_nonzero(lines == y, axis=1) == 1):
                return False
    return True


def validate(
    table: OperationTable, limits: EngineLimits = DEFAULT_LIMITS
) -> QuasigroupCert:
    """Check the Latin and alternating properties and compute perm(f)."""
    cube = table.cube()
    n = table.arity
    latin = _unique_solutions(cube)
    alternating = all(_is_invariant(cube, p) for p in alternating_generators(n))

    if n <= limits.exact_permutation_group_max_arity:
        perms = tuple(p for p in symmetric_group(n) if _is_invariant(cube, p))
        size = len(perms)
        exact = True
    else:
        # Only the alternating generators are tested; the size is a lower bound.
        identity = tuple(range(n))
        perms = (identity,) + tuple(
            p for p in alternating_generators(n) if _is_invariant(cube, p)
        )
        size = len(alternating_group(n)) if alternating else 1
        exact = False
        logger.info("arity %d above exact limit, group size is a lower bound", n)

    return QuasigroupCert(
        table=table,
        latin=latin,
        alternating=alternating,
        permutomorphism_group_size=size,
        group_size_exact=exact,
        permutomorphisms=perms,
    )


def divide(
    table: OperationTable, i: int, args: Sequence[int], y: int
) -> int:
    """The unique x_i with f(args with x_i inserted at coordinate i) = y.

    ``i`` is 1-based, matching the division operations g_1..g_n.
    """
    n = table.arity
    if not 1 <= i <= n:
        raise ValueError(f"coordinate {i} is outside 1..{n}")
    if len(args) != n - 1:
        raise ValueError(f"expected {n - 1} fixed arguments, got {len(args)}")
    for x in (*args, y):
        if not 0 <= x < table.order:
            raise TableError(f"element {x} is out of range for order {table.order}")
    index: list = list(args)
    index.insert(i - 1, slice(None))
    line = table.cube()[tuple(index)]
    hits = np.flatnonzero(line == y)
    if hits.size != 1:
        raise PreconditionError(
            f"table is not latin: f(...) = {y} has {hits.size} solutions in "
            f"coordinate {i} with fixed arguments {tuple(args)}"
        )
    return int(hits[0])


def nct_mask(table: OperationTable) -> np.ndarray:
    """Boolean cube marking the tuples that do not commute."""
    cube = table.cube()
    mask = np.zeros(cube.shape, dtype=bool)
    for p in symmetric_group(table.arity)[1:]:
        mask |= cube != cube.transpose(p)
    return mask


def nct(table: OperationTable) -> List[Tuple[int, ...]]:
    """Noncommuting tuples in lexicographic order."""
    return [tuple(int(x) for x in row) for row in np.argwhere(nct_mask(table))]


def inp(table: OperationTable) -> Set[int]:
    rows = np.argwhere(nct_mask(table))
    return {int(x) for x in np.unique(rows)} if rows.size else set()


def out(table: OperationTable) -> Set[int]:
    values = table.cube()[nct_mask(table)]
    return {int(x) for x in np.unique(values)}


def nct_orbits(table: OperationTable) -> List[Tuple[Tuple[int, ...], int]]:
    """Canonical alt_n-orbit representatives of nct with their values, sorted."""
    cube = table.cube()
    rows = np.argwhere(nct_mask(table))
    if rows.size == 0:
        return []
    dims = (table.order,) * table.arity
    flat = np.ravel_multi_index(rows.T, dims)
    least = flat.copy()
    for p in alternating_group(table.arity)[1:]:
        least = np.minimum(least, np.ravel_multi_index(rows[:, p].T, dims))
    reps = rows[flat == least]
    values = cube[tuple(reps.T)]
    return [
        (tuple(int(x) for x in rep), int(value)) for rep, value in zip(reps, values)
    ]


def is_commutative(table: OperationTable) -> bool:
    cube = table.cube()
    for i in range(table.arity - 1):
        swap = list(range(table.arity))
        swap[i], swap[i + 1] = swap[i + 1], swap[i]
        if not _is_invariant(cube, tuple(swap)):
            return False
    return True


class AssociativityCheck(BaseModel):
    """Outcome of the n-ary associativity test."""

    model_config = ConfigDict(frozen=True)

    holds: bool
    sampled: bool
    checked: int
    witness: Optional[Tuple[int, ...]] = None


def _first_violation(cube: np.ndarray, block: np.ndarray) -> Optional[np.ndarray]:
    n = cube.ndim
    inner = cube[tuple(block[:n])]
    reference = cube[tuple(np.vstack([inner[None, :], block[n:]]))]
    for shift in range(1, n):
        inner = cube[tuple(block[shift : shift + n])]
        outer = np.vstack([block[:shift], inner[None, :], block[shift + n :]])
        bad = np.flatnonzero(cube[tuple(outer)] != reference)
        if bad.size:
            return block[:, bad[0]]
    return None


def is_nary_associative(
    table: OperationTable,
    limits: EngineLimits = DEFAULT_LIMITS,
    seed: Optional[int] = None,
) -> AssociativityCheck:
    """Shift the inner block of f(f(a_1..a_n), a_{n+1}..a_{2n-1}) across positions."""
    cube = table.cube()
    n, m = table.arity, table.order
    width = 2 * n - 1
    if n == 1:
        # f(f(a)) has a single bracketing.
        return AssociativityCheck(holds=True, sampled=False, checked=m)

    if m**width <= limits.associativity_full_check_limit:
        rest = np.indices((m,) * (width - 1)).reshape(width - 1, -1)
        for first in range(m):
            block = np.vstack([np.full((1, rest.shape[1]), first), rest])
            witness = _first_violation(cube, block)
            if witness is not None:
                return AssociativityCheck(
                    holds=False,
                    sampled=False,
                    checked=m**width,
                    witness=tuple(int(x) for x in witness),
                )
        return AssociativityCheck(holds=True, sampled=False, checked=m**width)

    rng = np.random.default_rng(seed)
    block = rng.integers(0, m, size=(width, limits.associativity_samples))
    witness = _first_violation(cube, block)
    logger.info("associativity sampled on %d tuples", block.shape[1])
    return AssociativityCheck(
        holds=witness is None,
        sampled=True,
        checked=block.shape[1],
        witness=None if witness is None else tuple(int(x) for x in witness),
    )


class HomomorphismCheck(BaseModel):
    """Whether a map between tables is a homomorphism and an NC homomorphism."""

    model_config = ConfigDict(frozen=True)

    hom: bool
    nc_hom: bool
    witness: Optional[Tuple[int, ...]] = None


def check_homomorphism(
    src: OperationTable, dst: OperationTable, mapping: Sequence[int]
) -> HomomorphismCheck:
    if src.arity != dst.arity:
        raise PreconditionError(
            f"arity mismatch: source {src.arity}, target {dst.arity}"
        )
    if len(mapping) != src.order:
        raise PreconditionError(
            f"map has {len(mapping)} images for {src.order} source elements"
        )
    h = np.asarray(mapping, dtype=np.int64)
    if h.size and (h.min() < 0 or h.max() >= dst.order):
        raise PreconditionError("map sends an element outside the target")

    mesh = np.ix_(*([h] * src.arity))
    image_of_values = h[src.cube()]
    values_of_images = dst.cube()[mesh]
    mismatch = np.argwhere(image_of_values != values_of_images)
    if mismatch.size:
        return HomomorphismCheck(
            hom=False, nc_hom=False, witness=tuple(int(x) for x in mismatch[0])
        )

    lost = np.argwhere(nct_mask(src) & ~nct_mask(dst)[mesh])
    if lost.size:
        return HomomorphismCheck(
            hom=True, nc_hom=False, witness=tuple(int(x) for x in lost[0])
        )
    return HomomorphismCheck(hom=True, nc_hom=True)


def generated_subquasigroup(
    table: OperationTable, generators: Sequence[int]
) -> List[int]:
    """Closure of the generators under f and every division operation."""
    cube = table.cube()
    n, m = table.arity, table.order
    current = np.unique(np.asarray(generators, dtype=np.int64))
    everything = np.arange(m)
    while True:
        found = [current, cube[np.ix_(*([current] * n))].ravel()]
        for axis in range(n):
            axes = [current] * n
            axes[axis] = everything
            hits = np.isin(cube[np.ix_(*axes)], current)
            found.append(np.nonzero(hits)[axis])
        grown = np.unique(np.concatenate(found))
        if grown.size == current.size:
            return [int(x) for x in grown]
        current = grown
