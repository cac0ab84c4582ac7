"""Bipyramid charts, the reflection across the shared ridge and the standard metric.

Points of the open realization are barycentric coefficient maps over the
simplicization's vertices. Every function takes an ``exact`` flag: exact
evaluation uses ``fractions.Fraction``, the float path uses tolerance
``EngineLimits.float_tolerance`` to decide when a point lies on the ridge.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
import sympy

from .config import DEFAULT_LIMITS, EngineLimits
from .errors import ChartDomainError, PreconditionError
from .models import OperationTable, Vertex, VertexTag
from .quasigroup import divide, permute, symmetric_group

Number = Union[float, Fraction]


class ChartType(str, Enum):
    INPUT = "input"
    OUTPUT = "output"


class Branch(str, Enum):
    """Which side of the hyperplane sum(u) = 1 a point lies on."""
    BELOW = "below"
    ON = "on"
    ABOVE = "above"


@dataclass(frozen=True)
class RealizationPoint:
    """Barycentric coefficients of a chart value; zero coefficients are omitted."""

    chart: ChartType
    branch: Branch
    coefficients: Dict[Vertex, Number]

    def coefficient(self, vertex: Vertex) -> Number:
        return self.coefficients.get(vertex, 0)

    def support(self) -> List[Vertex]:
        return list(self.coefficients)

    def total(self) -> Number:
        return sum(self.coefficients.values())


@dataclass(frozen=True)
class ReflectionCheck:
    closed_form: Tuple[Number, ...]
    solved: Tuple[Number, ...]
    max_error: float


def _coerce(u: Sequence, exact: bool) -> List[Number]:
    if exact:
        return [Fraction(x) for x in u]
    return [float(x) for x in u]


def mirror(u: Sequence[Number]) -> List[Number]:
    """Reflection across sum(u) = 1; an involution swapping the two halves."""
    n = len(u)
    shift = (sum(u) - 1) * Fraction(2, n)
    return [x - shift for x in u]


def branch_of(
    u: Sequence[Number], limits: EngineLimits = DEFAULT_LIMITS
) -> Branch:
    total = sum(u)
    if isinstance(total, Fraction):
        gap = total - 1
    else:
        gap = 0 if abs(total - 1) <= limits.float_tolerance else total - 1
    if gap < 0:
        return Branch.BELOW
    if gap > 0:
        return Branch.ABOVE
    return Branch.ON


def in_bipyramid(u: Sequence[Number], limits: EngineLimits = DEFAULT_LIMITS) -> bool:
    """Membership in the open bipyramid spanned by 0, (2/n..2/n) and e_1..e_n."""
    if not u:
        return False
    branch = branch_of(u, limits)
    if branch is Branch.ABOVE:
        return all(x > 0 for x in mirror(u))
    return all(x > 0 for x in u)


def _slots(kind: ChartType, branch: Branch, u: Sequence) -> list:
    """Coefficients in slot order.

    Input charts use slots (a_1..a_n, f(a), f(a')); output charts use
    (a_1..a_n, f(a), a_{n+1}).
    """
    n = len(u)
    total = sum(u)
    side = list(mirror(u)) if branch is Branch.ABOVE else list(u)
    across = total - 1 if branch is Branch.ABOVE else 0
    if kind is ChartType.INPUT:
        below = 1 - total if branch is Branch.BELOW else 0
        return side + [below, across]
    last = 1 - total if branch is Branch.BELOW else 0
    return side[: n - 1] + [last, side[n - 1], across]


def _is_noncommuting(table: OperationTable, a: Sequence[int]) -> bool:
    value = table.value(a)
    return any(
        table.value(permute(a, p)) != value for p in symmetric_group(table.arity)
    )


def _prepare(
    table: OperationTable, a: Sequence[int], u: Sequence, exact: bool, limits
) -> Tuple[Tuple[int, ...], List[Number], Branch]:
    a = tuple(int(x) for x in a)
    if len(a) != table.arity or len(u) != table.arity:
        raise ValueError(
            f"tuple and coordinates must both have {table.arity} entries"
        )
    if not _is_noncommuting(table, a):
        raise PreconditionError(f"{a} commutes, so it has no chart")
    point = _coerce(u, exact)
    if not in_bipyramid(point, limits):
        raise ChartDomainError(f"{tuple(u)} is outside the open bipyramid")
    return a, point, branch_of(point, limits)


def _assemble(
    table: OperationTable,
    kind: ChartType,
    branch: Branch,
    slots: Sequence[Tuple[VertexTag, int]],
    values: Sequence[Number],
) -> RealizationPoint:
    coefficients: Dict[Vertex, Number] = {}
    for (tag, element), value in zip(slots, values):
        if value == 0:
            continue
        vertex = Vertex(tag=tag, element=element, label=table.label(element))
        coefficients[vertex] = coefficients.get(vertex, 0) + value
    return RealizationPoint(chart=kind, branch=branch, coefficients=coefficients)


def chart_input(
    table: OperationTable,
    a: Sequence[int],
    u: Sequence,
    exact: bool = False,
    limits: EngineLimits = DEFAULT_LIMITS,
) -> RealizationPoint:
    """Chart onto the facets of a and a' (a with its last two entries swapped)."""
    a, point, branch = _prepare(table, a, u, exact, limits)
    swapped = a[:-2] + (a[-1], a[-2])
    slots = [(VertexTag.INPUT, x) for x in a] + [
        (VertexTag.OUTPUT, table.value(a)),
        (VertexTag.OUTPUT, table.value(swapped)),
    ]
    values = _slots(ChartType.INPUT, branch, point)
    return _assemble(table, ChartType.INPUT, branch, slots, values)


def output_partner(table: OperationTable, a: Sequence[int]) -> int:
    """a_{n+1}: f(a_1..a_{n-2}, a_{n+1}, a_{n-1}) = f(a)."""
    n = table.arity
    fixed = tuple(a[: n - 2]) + (a[n - 2],)
    return divide(table, n - 1, fixed, table.value(a))


def chart_output(
    table: OperationTable,
    a: Sequence[int],
    u: Sequence,
    exact: bool = False,
    limits: EngineLimits = DEFAULT_LIMITS,
) -> RealizationPoint:
    """Chart whose ridge {a_1..a_{n-1}, f(a)} carries an output vertex."""
    a, point, branch = _prepare(table, a, u, exact, limits)
    slots = [(VertexTag.INPUT, x) for x in a] + [
        (VertexTag.OUTPUT, table.value(a)),
        (VertexTag.INPUT, output_partner(table, a)),
    ]
    values = _slots(ChartType.OUTPUT, branch, point)
    return _assemble(table, ChartType.OUTPUT, branch, slots, values)


def reflection_oracle(u: Sequence, exact: bool = False) -> ReflectionCheck:
    """Mirror image of u computed by the closed form and by a linear solve.

    The solve finds the foot w of u on sum = 1 from w_i - w_{i+1} = u_i - u_{i+1}
    and sum(w) = 1, then returns 2w - u.
    """
    point = _coerce(u, exact)
    n = len(point)
    if not sum(point) > 1:
        raise ValueError("the reflection is defined for points with sum(u) > 1")
    total = sum(point)
    closed = tuple(
        Fraction(2, n) * (1 + Fraction(n - 2, 2) * x - (total - x)) for x in point
    )
    rows = [[0] * n for _ in range(n)]
    rhs = []
    for i in range(n - 1):
        rows[i][i], rows[i][i + 1] = 1, -1
        rhs.append(point[i] - point[i + 1])
    rows[n - 1] = [1] * n
    rhs.append(1)

    if exact:
        target = sympy.Matrix([sympy.Rational(x) for x in rhs])
        solution = sympy.Matrix(rows).LUsolve(target)
        foot = [Fraction(int(w.p), int(w.q)) for w in solution]
        solved = tuple(2 * w - x for w, x in zip(foot, point))
        error = float(max(abs(c - s) for c, s in zip(closed, solved)))
    else:
        foot = np.linalg.solve(
            np.asarray(rows, dtype=float), np.asarray(rhs, dtype=float)
        )
        solved = tuple(float(x) for x in 2 * foot - np.asarray(point))
        closed = tuple(float(x) for x in closed)
        error = float(np.max(np.abs(np.subtract(closed, solved))))
    return ReflectionCheck(closed_form=closed, solved=solved, max_error=error)


def metric_matrix(n: int) -> sympy.Matrix:
    """J_n + I_n: the standard metric on a facet in the basis p_i - q."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return sympy.ones(n, n) + sympy.eye(n)


def metric_determinant(n: int) -> sympy.Integer:
    return metric_matrix(n).det()


def edge_length(n: int) -> sympy.Expr:
    """Length of an edge of a facet under the standard metric."""
    g = metric_matrix(n)
    if n == 1:
        edge = sympy.Matrix([1])
    else:
        edge = sympy.Matrix([1, -1] + [0] * (n - 2))
    return sympy.sqrt((edge.T * g * edge)[0, 0])


def chart_gram(n: int, chart: ChartType, branch: Branch) -> sympy.Matrix:
    """Gram matrix of the coordinate fields d/du_k of a chart branch.

    Facets are regular simplices with edge sqrt(2), i.e. the standard basis of
    R^(n+2) over the chart's slots, so a tangent vector's squared length is the
    sum of squares of its coefficient derivatives. On the ridge both branches
    have the same derivative from below.
    """
    branch = Branch(branch)
    if branch is Branch.ON:
        branch = Branch.BELOW
    u = sympy.symbols(f"u1:{n + 1}")
    coefficients = sympy.Matrix(_slots(ChartType(chart), branch, list(u)))
    jacobian = coefficients.jacobian(u)
    return sympy.simplify(jacobian.T * jacobian)
