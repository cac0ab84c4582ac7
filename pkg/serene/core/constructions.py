"""Builders for the example quasigroups and the builtin registry."""
import itertools
import logging
import math
import re
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer

from .errors import InternalConsistencyError, PreconditionError, UnknownNameError
from .models import AltMapTable, OperationTable
from .quasigroup import (
    alternating_generators,
    alternating_group,
    is_commutative,
    permutation_parity,
    validate,
)

logger = logging.getLogger(__name__)

# Largest table (entries) the field builder will materialize.
MAX_TABLE_ENTRIES = 5_000_000

Q8_LABELS = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
_UNITS = ("1", "i", "j", "k")
# Products of quaternion units as (sign, unit).
_UNIT_PRODUCTS = {
    ("i", "i"): (-1, "1"),
    ("j", "j"): (-1, "1"),
    ("k", "k"): (-1, "1"),
    ("i", "j"): (1, "k"),
    ("j", "k"): (1, "i"),
    ("k", "i"): (1, "j"),
    ("j", "i"): (-1, "k"),
    ("k", "j"): (-1, "i"),
    ("i", "k"): (-1, "j"),
}

# Orbit representatives of the order-5 ternary quasigroup under Z/5 x alt_3.
ORDER5_REPRESENTATIVES = {
    (0, 0, 0): 0,
    (0, 1, 1): 0,
    (0, 2, 2): 0,
    (0, 1, 2): 3,
    (0, 2, 1): 4,
    (0, 1, 3): 4,
    (0, 3, 1): 2,
}

# F_9 = F_3[t]/(t^2 + 1); element c0 + c1 t has id c0 + 3 c1.
F9_LABELS = ("0", "1", "2", "t", "1+t", "2+t", "2t", "1+2t", "2+2t")


def quaternion_group() -> OperationTable:
    """Cayley table of Q8 with ids 0..7 = 1, -1, i, -i, j, -j, k, -k."""

    def split(element: int) -> Tuple[int, str]:
        return (1 if element % 2 == 0 else -1), _UNITS[element // 2]

    def join(sign: int, unit: str) -> int:
        return 2 * _UNITS.index(unit) + (0 if sign == 1 else 1)

    cube = np.zeros((8, 8), dtype=np.int64)
    for x, y in itertools.product(range(8), repeat=2):
        sx, ux = split(x)
        sy, uy = split(y)
        if ux == "1":
            sign, unit = 1, uy
        elif uy == "1":
            sign, unit = 1, ux
        else:
            sign, unit = _UNIT_PRODUCTS[(ux, uy)]
        cube[x, y] = join(sx * sy * sign, unit)
    return OperationTable.from_cube(cube, Q8_LABELS)


def cyclic_group(m: int) -> OperationTable:
    x, y = np.indices((m, m))
    return OperationTable.from_cube((x + y) % m, [str(i) for i in range(m)])


def dihedral_group(k: int) -> OperationTable:
    """Dihedral group of order 2k; r^a s^b has id a + k b."""
    if k < 1:
        raise ValueError("dihedral group needs k >= 1")
    labels = [f"r{a}" for a in range(k)] + [f"sr{a}" if a else "s" for a in range(k)]
    cube = np.zeros((2 * k, 2 * k), dtype=np.int64)
    for x, y in itertools.product(range(2 * k), repeat=2):
        a1, b1 = x % k, x // k
        a2, b2 = y % k, y // k
        a = (a1 + (a2 if b1 == 0 else -a2)) % k
        cube[x, y] = a + k * ((b1 + b2) % 2)
    return OperationTable.from_cube(cube, labels)


def sum_quasigroup(m: int, n: int) -> OperationTable:
    """The commutative n-quasigroup (x_1..x_n) -> x_1 + ... + x_n on Z/m."""
    return OperationTable.from_cube(
        np.indices((m,) * n).sum(axis=0) % m, [str(i) for i in range(m)]
    )


def trivial(n: int = 2) -> OperationTable:
    return OperationTable(arity=n, order=1, values=(0,), labels=("e",))


def construct_order5() -> OperationTable:
    """Rebuild the order-5 ternary alternating quasigroup from its seven rows.

    The rows are closed under f(x + k) = f(x) + k and the cyclic shifts of
    the arguments; the two orbits the rows leave open are forced by the
    Latin property.
    """
    m, n = 5, 3
    cube = np.full((m,) * n, -1, dtype=np.int64)
    rotations = alternating_group(n)

    def close(args: Tuple[int, ...], value: int) -> None:
        for k in range(m):
            for p in rotations:
                image = tuple((args[i] + k) % m for i in p)
                target = (value + k) % m
                if cube[image] not in (-1, target):
                    raise InternalConsistencyError(
                        f"order-5 closure assigns {image} both {cube[image]} "
                        f"and {target}"
                    )
                cube[image] = target

    for args, value in ORDER5_REPRESENTATIVES.items():
        close(args, value)

    symbols = set(range(m))
    progress = True
    while progress and (cube < 0).any():
        progress = False
        for cell in map(tuple, np.argwhere(cube < 0)):
            if cube[cell] >= 0:
                continue
            for axis in range(n):
                index = list(cell)
                index[axis] = slice(None)
                line = cube[tuple(index)]
                missing = symbols - set(int(v) for v in line if v >= 0)
                if len(missing) == 1 and np.count_nonzero(line < 0) == 1:
                    close(cell, missing.pop())
                    progress = True
                    break
    if (cube < 0).any():
        raise InternalConsistencyError("order-5 table is not determined by its rows")

    table = OperationTable.from_cube(cube, [str(i) for i in range(m)])
    for args, value in ORDER5_REPRESENTATIVES.items():
        if table.value(args) != value:
            raise InternalConsistencyError(f"row {args} -> {value} was not reproduced")
    cert = validate(table)
    if not (cert.latin and cert.alternating):
        raise InternalConsistencyError("order-5 table is not an alternating quasigroup")
    return table


def alternating_map(
    domain_order: int, codomain_order: int, arity: int, ones: List[Tuple[int, ...]]
) -> AltMapTable:
    """Indicator-style map: `ones` (closed under alt_n) go to 1, the rest to 0."""
    values = np.zeros((domain_order,) * arity, dtype=np.int64)
    for args in ones:
        values[tuple(args)] = 1
    return AltMapTable(
        arity=arity,
        domain_order=domain_order,
        codomain_order=codomain_order,
        values=tuple(values.ravel().tolist()),
    )


def alternating_product(
    u: OperationTable, v: OperationTable, alpha: AltMapTable
) -> OperationTable:
    """(u_i, v_i)_i -> (g(u), h(alpha(u), v_1..v_n)) with (u, v) encoded u|V| + v."""
    n = u.arity
    if v.arity != n + 1:
        raise PreconditionError(f"V must have arity {n + 1}, got {v.arity}")
    if (alpha.arity, alpha.domain_order, alpha.codomain_order) != (n, u.order, v.order):
        raise PreconditionError("alpha must map U^n to V")
    if not is_commutative(u):
        raise PreconditionError("U is not commutative")
    if not is_commutative(v):
        raise PreconditionError("V is not commutative")
    alpha_cube = alpha.cube()
    for p in alternating_generators(n):
        if not np.array_equal(alpha_cube, alpha_cube.transpose(p)):
            raise PreconditionError("alpha is not alternating")

    width = v.order
    order = u.order * width
    if order**n > MAX_TABLE_ENTRIES:
        raise PreconditionError(f"product table would have {order**n} entries")
    index = np.indices((order,) * n)
    us, vs = index // width, index % width
    g = u.cube()[tuple(us)]
    h = v.cube()[(alpha_cube[tuple(us)],) + tuple(vs)]
    labels = [
        f"{u.label(a)}|{v.label(b)}" for a in range(u.order) for b in range(width)
    ]
    return OperationTable.from_cube(g * width + h, labels)


def order6_example() -> OperationTable:
    """Z/3 (sum of three) times Z/2 (sum of four), twisted on the orbit of (0,2,1)."""
    return alternating_product(
        sum_quasigroup(3, 3),
        sum_quasigroup(2, 4),
        alternating_map(3, 2, 3, [(0, 2, 1), (2, 1, 0), (1, 0, 2)]),
    )


def finite_field(q: int) -> Tuple[np.ndarray, np.ndarray, Tuple[str, ...]]:
    """Addition table, multiplication table and labels of F_q for odd q <= 9."""
    if q % 2 == 0:
        raise ValueError(f"q = {q} is even; characteristic 2 gives commutative tables")
    if q in (3, 5, 7):
        x, y = np.indices((q, q))
        return (x + y) % q, (x * y) % q, tuple(str(i) for i in range(q))
    if q == 9:
        x, y = np.indices((9, 9))
        a0, a1, b0, b1 = x % 3, x // 3, y % 3, y // 3
        add = (a0 + b0) % 3 + 3 * ((a1 + b1) % 3)
        mul = (a0 * b0 - a1 * b1) % 3 + 3 * ((a0 * b1 + a1 * b0) % 3)
        return add, mul, F9_LABELS
    raise ValueError(f"q = {q} is not an odd prime power up to 9")


def field_determinant(q: int, n: int) -> AltMapTable:
    """det: (F_q^n)^n -> F_q, rows indexed by vectors in mixed radix."""
    add, mul, _ = finite_field(q)
    negate = np.argmin(add, axis=1)  # a + (-a) = 0 and 0 is the smallest id
    size = q**n
    coords = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)
    rows = np.indices((size,) * n).reshape(n, -1)
    total = np.zeros(rows.shape[1], dtype=np.int64)
    for sigma in itertools.permutations(range(n)):
        term = np.ones(rows.shape[1], dtype=np.int64)
        for row, column in enumerate(sigma):
            term = mul[term, coords[rows[row], column]]
        if permutation_parity(sigma):
            term = negate[term]
        total = add[total, term]
    return AltMapTable(
        arity=n, domain_order=size, codomain_order=q, values=tuple(total.tolist())
    )


def field_quasigroup(q: int, n: int) -> OperationTable:
    """F_q^n (sum) twisted into F_q (sum of n+1) by the determinant."""
    if not 1 <= n <= 3:
        raise ValueError("field quasigroups are built for arity 1..3")
    _, _, field_labels = finite_field(q)
    entries = (q ** (n + 1)) ** n
    if entries > MAX_TABLE_ENTRIES:
        raise PreconditionError(
            f"F_{q}^({n}) has {entries:,} entries, above the tabulation limit of "
            f"{MAX_TABLE_ENTRIES:,}; at arity 3 only q = 3 fits"
        )
    add, _, _ = finite_field(q)
    size = q**n
    coords = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)

    # Vector addition on F_q^n, reduced through the field addition table.
    index = np.indices((size,) * n).reshape(n, -1)
    vector_sum = np.zeros((index.shape[1], n), dtype=np.int64)
    for row in range(n):
        vector_sum = add[vector_sum, coords[index[row]]]
    radix = q ** np.arange(n - 1, -1, -1)
    u_values = (vector_sum * radix).sum(axis=1)
    separator = "," if q == 9 else ""
    u = OperationTable(
        arity=n,
        order=size,
        values=tuple(u_values.tolist()),
        labels=tuple(separator.join(field_labels[c] for c in vec) for vec in coords),
    )

    v_index = np.indices((q,) * (n + 1)).reshape(n + 1, -1)
    v_values = np.zeros(v_index.shape[1], dtype=np.int64)
    for row in range(n + 1):
        v_values = add[v_values, v_index[row]]
    v = OperationTable(
        arity=n + 1, order=q, values=tuple(v_values.tolist()), labels=field_labels
    )
    return alternating_product(u, v, field_determinant(q, n))


def gl_order(q: int, n: int) -> int:
    """|GL_n(F_q)| by testing every n x n matrix for a nonzero determinant."""
    det = np.asarray(field_determinant(q, n).values)
    return int(np.count_nonzero(det))


class VertexCountReadings(BaseModel):
    """Two readings of the NC-graph vertex count formula for F_q^(n)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    q: int
    n: int
    product_from_one: Fraction
    product_from_zero: Fraction

    @field_serializer("product_from_one", "product_from_zero")
    def _serialize_fraction(self, value: Fraction) -> str:
        return str(value)


def vertex_count_readings(q: int, n: int) -> VertexCountReadings:
    """(2 q^n / n!) prod (q^n - q^k), with k starting at 1 and at 0."""
    scale = Fraction(2 * q**n, math.factorial(n))
    from_one = scale * math.prod(q**n - q**k for k in range(1, n))
    from_zero = scale * math.prod(q**n - q**k for k in range(0, n))
    return VertexCountReadings(
        q=q, n=n, product_from_one=from_one, product_from_zero=from_zero
    )


_FIXED: Dict[str, Callable[[], OperationTable]] = {
    "trivial": trivial,
    "q8": quaternion_group,
    "a5": construct_order5,
    "a6": order6_example,
}

_PATTERNS: List[Tuple[str, str, Callable[..., OperationTable]]] = [
    (r"z(\d+)", "z<m>", lambda m: cyclic_group(int(m))),
    (r"d(\d+)", "d<k>", lambda k: dihedral_group(int(k))),
    (r"sum(\d+)x(\d+)", "sum<m>x<n>", lambda m, n: sum_quasigroup(int(m), int(n))),
    (
        r"field:(\d+),(\d+)",
        "field:<q>,<n>",
        lambda q, n: field_quasigroup(int(q), int(n)),
    ),
]


def available_builtins() -> List[str]:
    return list(_FIXED) + [shown for _, shown, _ in _PATTERNS]


def builtin(name: str) -> OperationTable:
    """Look up a named example table."""
    key = name.strip().lower()
    if key in _FIXED:
        return _FIXED[key]()
    for pattern, _, factory in _PATTERNS:
        match = re.fullmatch(pattern, key)
        if match:
            logger.debug("building %s from pattern %s", key, pattern)
            return factory(*match.groups())
    raise UnknownNameError("example", name, available_builtins())
