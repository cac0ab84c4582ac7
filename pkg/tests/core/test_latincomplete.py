"""Tests for partial cube checks and the Latin completion search."""
import numpy as np
import pytest

from serene.core.config import SearchSettings
from serene.core.constructions import ORDER5_REPRESENTATIVES, builtin
from serene.core.errors import PreconditionError
from serene.core.fixtures import oriented_fixture
from serene.core.freecomplete import seed
from serene.core.latincomplete import (
    check_partial,
    complete,
    complete_with,
    evans_instances,
    partial_from_state,
    quasifinite_probe,
    random_evans_instance,
)
from serene.core.models import PartialCube
from serene.core.quasigroup import validate


def _cube(arity, order, entries):
    return PartialCube(arity=arity, order=order, entries=frozenset(entries))


def test_check_partial_latin_clause():
    """Test two values in one cell break the output role."""
    check = check_partial(_cube(2, 3, [(0, 0, 1), (0, 0, 2)]))
    assert not check.ok
    assert check.violations[0].clause == "latin"
    assert check.violations[0].role == 2


def test_check_partial_alternating_clause():
    """Test a rotation with a different value breaks the alternating clause."""
    check = check_partial(_cube(3, 5, [(0, 1, 2, 3), (1, 2, 0, 4)]))
    assert not check.ok
    assert [v.clause for v in check.violations] == ["alternating"]
    assert check_partial(_cube(3, 5, [(0, 1, 2, 3), (1, 2, 0, 3)])).ok


def test_complete_rejects_bad_input():
    """Test preconditions on the partial cube and the order range."""
    with pytest.raises(PreconditionError, match="latin clause"):
        complete(_cube(2, 3, [(0, 0, 1), (0, 1, 1)]))
    with pytest.raises(ValueError, match="below the order"):
        complete(_cube(2, 3, []), max_order=2)


def test_complete_empty_square():
    """Test an empty partial square completes at its own order."""
    result = complete(_cube(2, 4, []))
    assert result.found
    assert result.table.order == 4
    assert validate(result.table).latin
    assert [a.outcome for a in result.attempts] == ["found"]
    assert result.nodes >= 16


def test_order_escalation():
    """Test an incompletable order-2 square completes at order 3."""
    p = _cube(2, 2, [(0, 0, 0), (1, 1, 1)])
    result = complete(p)
    assert not result.found
    assert result.attempts[0].outcome == "exhausted"

    result = complete(p, max_order=3)
    assert result.found
    assert [a.outcome for a in result.attempts] == ["exhausted", "found"]
    assert result.table.order == 3
    assert result.table.value((0, 0)) == 0
    assert result.table.value((1, 1)) == 1


def test_budget_stop():
    """Test the node budget ends the search without a verdict."""
    result = complete(_cube(2, 5, []), budget=3)
    assert not result.found
    assert result.attempts[0].outcome == "budget"
    assert result.attempts[0].nodes == 4


def test_orbit_closure_contradiction():
    """Test entries whose rotations collide on a line."""
    p = _cube(3, 4, [(0, 1, 2, 0), (1, 2, 3, 0)])
    assert check_partial(p).ok
    result = complete(p, max_order=5)
    assert not result.found
    assert [a.outcome for a in result.attempts] == ["contradiction", "contradiction"]


def test_order5_rows_complete():
    """Test the seven order-5 rows complete to an alternating quasigroup."""
    entries = [args + (value,) for args, value in ORDER5_REPRESENTATIVES.items()]
    p = _cube(3, 5, entries)
    result = complete(p)
    assert result.found
    cert = validate(result.table)
    assert cert.latin and cert.alternating
    for args, value in ORDER5_REPRESENTATIVES.items():
        assert result.table.value(args) == value


@pytest.mark.parametrize("reduce_symmetry", [True, False])
def test_forced_completion(reduce_symmetry):
    """Test a cube fixed by two layers completes to the sum table in both modes."""
    target = builtin("sum3x3")
    entries = [
        args + (target.value(args),)
        for args in np.ndindex(3, 3, 3)
        if args[0] in (1, 2)
    ]
    result = complete(_cube(3, 3, entries), reduce_symmetry=reduce_symmetry)
    assert result.found
    assert result.reduce_symmetry is reduce_symmetry
    assert result.table.values == target.values


def test_unreduced_search_is_alternating():
    """Test the unreduced search still returns alternating tables."""
    result = complete(_cube(3, 4, [(0, 1, 2, 3)]), reduce_symmetry=False)
    assert result.found
    assert validate(result.table).alternating
    assert result.attempts[0].cells == 64


def test_seeded_search_is_reproducible():
    """Test the same seed gives the same table."""
    p = _cube(2, 5, [(0, 0, 1)])
    first = complete(p, seed=9)
    second = complete(p, seed=9)
    assert first.table == second.table


def test_complete_with_settings():
    """Test search settings are passed through."""
    settings = SearchSettings(max_order=3, budget=1000)
    result = complete_with(_cube(2, 2, [(0, 0, 0), (1, 1, 1)]), settings)
    assert result.found
    assert result.table.order == 3


def test_partial_from_state():
    """Test the level-0 torus seed as a partial square."""
    p = partial_from_state(seed(oriented_fixture("torus7")))
    assert p.arity == 2
    assert p.order == 21
    assert len(p.entries) == 42
    assert check_partial(p).ok


def test_evans_instances_small():
    """Test the enumeration of order-2 squares with at most one entry."""
    assert len(list(evans_instances(2, 1))) == 9


@pytest.mark.slow
@pytest.mark.parametrize("m", [2, 3, 4])
def test_evans_exhaustive(m):
    """Test every square with fewer than m entries completes at order m."""
    count = 0
    for p in evans_instances(m, m - 1):
        result = complete(p)
        assert result.found, sorted(p.entries)
        count += 1
    assert count > 0


@pytest.mark.slow
def test_evans_random_order5():
    """Test 1000 random order-5 squares with fewer than 5 entries."""
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        p = random_evans_instance(5, rng)
        assert len(p.entries) < 5
        assert complete(p).found, sorted(p.entries)


@pytest.mark.slow
def test_probe_sphere():
    """Test the probe completes the seed of the 2-sphere."""
    result = quasifinite_probe(oriented_fixture("boundary-simplex-3"))
    assert result.arity == 2
    assert result.seed_entries == 12
    assert result.seed_order == 8
    assert result.completion.found
    assert result.completion.table.order == 8
    assert result.exact_component
    assert result.euler_characteristic == 2
    assert result.genus == 0


@pytest.mark.slow
def test_probe_torus():
    """Test the probe completes the seed of the seven-vertex torus."""
    result = quasifinite_probe(oriented_fixture("torus7"), seed=1)
    assert result.seed_entries == 42
    assert result.completion.found
    assert result.exact_component
    assert result.genus == 1
