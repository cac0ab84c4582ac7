"""Test configuration and fixtures."""
import numpy as np
import pytest
from click.testing import CliRunner

from serene.core.constructions import (
    alternating_product,
    construct_order5,
    order6_example,
    quaternion_group,
    sum_quasigroup,
)
from serene.core.models import AltMapTable
from serene.core.quasigroup import orbit_representative

# (arity, |U|, |V|) of the seeded random alternating products
PRODUCT_SHAPES = [(2, 2, 2), (2, 3, 2), (2, 3, 3), (2, 4, 2), (3, 3, 2), (3, 4, 2)]


@pytest.fixture
def cli_runner():
    """Fixture for CLI testing."""
    return CliRunner()


@pytest.fixture(scope="session")
def q8():
    """Cayley table of the quaternion group."""
    return quaternion_group()


@pytest.fixture(scope="session")
def a5():
    """The order-5 ternary alternating quasigroup."""
    return construct_order5()


@pytest.fixture(scope="session")
def a6():
    """The order-6 alternating product."""
    return order6_example()


def random_alternating_map(rng, arity, domain_order, codomain_order):
    """A map U^n -> V constant on alt_n-orbits, one random value per orbit."""
    values = {}
    flat = []
    for args in np.ndindex(*(domain_order,) * arity):
        rep = orbit_representative(args)
        if rep not in values:
            values[rep] = int(rng.integers(codomain_order))
        flat.append(values[rep])
    return AltMapTable(
        arity=arity,
        domain_order=domain_order,
        codomain_order=codomain_order,
        values=tuple(flat),
    )


@pytest.fixture(scope="session")
def random_products():
    """Alternating products of Z/m sums twisted by seeded random maps."""
    rng = np.random.default_rng(2024)
    tables = []
    for n, mu, mv in PRODUCT_SHAPES:
        for _ in range(2):
            alpha = random_alternating_map(rng, n, mu, mv)
            u = sum_quasigroup(mu, n)
            v = sum_quasigroup(mv, n + 1)
            tables.append(alternating_product(u, v, alpha))
    return tables
