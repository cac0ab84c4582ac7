"""Data models for serene."""
from enum import Enum
from typing import FrozenSet, Optional, Sequence, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveInt,
    field_serializer,
    model_validator,
)


class OperationTable(BaseModel):
    """A total n-ary operation on {0..m-1}.

    Values are stored flat in mixed-radix order with x_1 the most significant
    digit, so ``values`` is the C-order ravel of the value hypercube.
    """

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "arity": 2,
                "order": 2,
                "values": [0, 1, 1, 0],
                "labels": ["0", "1"],
            }
        },
    )

    arity: PositiveInt
    order: PositiveInt
    values: Tuple[int, ...]
    labels: Optional[Tuple[str, ...]] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "OperationTable":
        expected = self.order**self.arity
        if len(self.values) != expected:
            raise ValueError(
                f"values has length {len(self.values)}, expected "
                f"order**arity = {expected}"
            )
        flat = np.asarray(self.values, dtype=np.int64)
        bad = np.flatnonzero((flat < 0) | (flat >= self.order))
        if bad.size:
            index = int(bad[0])
            raise ValueError(
                f"value {self.values[index]} at index {index} is out of range "
                f"for order {self.order}"
            )
        if self.labels is not None:
            if len(self.labels) != self.order:
                raise ValueError(
                    f"expected {self.order} labels, got {len(self.labels)}"
                )
            if len(set(self.labels)) != self.order:
                raise ValueError("labels must be distinct")
        return self

    @classmethod
    def from_cube(
        cls, cube: np.ndarray, labels: Optional[Sequence[str]] = None
    ) -> "OperationTable":
        """Build a table from an (m,)*n value hypercube."""
        cube = np.asarray(cube)
        return cls(
            arity=cube.ndim,
            order=cube.shape[0],
            values=tuple(cube.ravel().tolist()),
            labels=tuple(labels) if labels is not None else None,
        )

    def cube(self) -> np.ndarray:
        """The value hypercube as an int64 array of shape (m,)*n."""
        return np.asarray(self.values, dtype=np.int64).reshape(
            (self.order,) * self.arity
        )

    def index(self, args: Sequence[int]) -> int:
        """Flat index of an argument tuple."""
        flat = 0
        for x in args:
            flat = flat * self.order + x
        return flat

    def value(self, args: Sequence[int]) -> int:
        """f(args)."""
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(args)}")
        return self.values[self.index(args)]

    def label(self, element: int) -> str:
        """Display label of an element id."""
        if self.labels is None:
            return str(element)
        return self.labels[element]

    def element(self, token: str) -> int:
        """Element id for a label, falling back to a literal integer id."""
        if self.labels is not None and token in self.labels:
            return self.labels.index(token)
        try:
            element = int(token)
        except ValueError:
            raise ValueError(f"'{token}' is not an element label or id") from None
        if not 0 <= element < self.order:
            raise ValueError(
                f"element {element} is out of range for order {self.order}"
            )
        return element


class QuasigroupCert(BaseModel):
    """Result of validating an operation table."""

    model_config = ConfigDict(frozen=True)

    table: OperationTable
    latin: bool
    alternating: bool
    permutomorphism_group_size: PositiveInt
    group_size_exact: bool = True
    permutomorphisms: Tuple[Tuple[int, ...], ...] = ()


class AltMapTable(BaseModel):
    """A map U^n -> V stored flat over U^n, meant to be alternating."""

    model_config = ConfigDict(frozen=True)

    arity: PositiveInt
    domain_order: PositiveInt
    codomain_order: PositiveInt
    values: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "AltMapTable":
        expected = self.domain_order**self.arity
        if len(self.values) != expected:
            raise ValueError(
                f"values has length {len(self.values)}, expected {expected}"
            )
        for index, value in enumerate(self.values):
            if not 0 <= value < self.codomain_order:
                raise ValueError(
                    f"value {value} at index {index} is out of range for "
                    f"codomain order {self.codomain_order}"
                )
        return self

    def cube(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64).reshape(
            (self.domain_order,) * self.arity
        )


class VertexTag(str, Enum):
    """Whether a vertex stands for an input or an output element."""
    INPUT = "in"
    OUTPUT = "out"


class Vertex(BaseModel):
    """A tagged vertex; (in, a) and (out, a) are different vertices."""

    model_config = ConfigDict(frozen=True)

    tag: VertexTag
    element: NonNegativeInt
    label: str

    def display(self) -> str:
        """Label with a combining underline (input) or overline (output)."""
        mark = "\u0332" if self.tag is VertexTag.INPUT else "\u0305"
        return "".join(ch + mark for ch in self.label)

    def plain(self) -> str:
        """ASCII form, e.g. ``in:i`` or ``out:-k``."""
        return f"{self.tag.value}:{self.label}"


class SimpComplex(BaseModel):
    """A pure simplicial complex given by its facets.

    Facets are strictly increasing tuples of vertex indices. Lower faces are
    generated on demand.
    """

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "dim": 1,
                "vertices": [
                    {"tag": "in", "element": 0, "label": "a"},
                    {"tag": "in", "element": 1, "label": "b"},
                    {"tag": "in", "element": 2, "label": "c"},
                ],
                "facets": [[0, 1], [1, 2], [0, 2]],
            }
        },
    )

    dim: NonNegativeInt
    vertices: Tuple[Vertex, ...]
    facets: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_facets(self) -> "SimpComplex":
        used = set()
        for position, facet in enumerate(self.facets):
            if len(facet) != self.dim + 1:
                raise ValueError(
                    f"facet {position} has {len(facet)} vertices, expected "
                    f"{self.dim + 1}"
                )
            if any(a >= b for a, b in zip(facet, facet[1:])):
                raise ValueError(
                    f"facet {position} must list distinct vertices in increasing order"
                )
            if facet and not 0 <= facet[0] <= facet[-1] < len(self.vertices):
                raise ValueError(f"facet {position} references an unknown vertex")
            used.update(facet)
        if len(set(self.facets)) != len(self.facets):
            raise ValueError("facets must be pairwise distinct")
        if len(used) != len(self.vertices):
            unused = sorted(set(range(len(self.vertices))) - used)
            raise ValueError(f"vertex {unused[0]} lies in no facet")
        return self

    def facet_vertices(self, position: int) -> Tuple[Vertex, ...]:
        return tuple(self.vertices[v] for v in self.facets[position])


class OrientedComplex(BaseModel):
    """A complex with a sign per facet relative to its sorted vertex order."""

    model_config = ConfigDict(frozen=True)

    base: SimpComplex
    orientation: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_orientation(self) -> "OrientedComplex":
        if len(self.orientation) != len(self.base.facets):
            raise ValueError(
                f"orientation has {len(self.orientation)} signs for "
                f"{len(self.base.facets)} facets"
            )
        if any(sign not in (1, -1) for sign in self.orientation):
            raise ValueError("orientation signs must be +1 or -1")
        return self


class PartialCube(BaseModel):
    """A set of (n+1)-tuples (x_1..x_n, y) meant as a partial alternating cube."""

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {"arity": 2, "order": 3, "entries": [[0, 0, 0]]}
        },
    )

    arity: PositiveInt
    order: PositiveInt
    entries: FrozenSet[Tuple[int, ...]] = Field(default_factory=frozenset)

    @model_validator(mode="after")
    def _check_entries(self) -> "PartialCube":
        for entry in sorted(self.entries):
            if len(entry) != self.arity + 1:
                raise ValueError(
                    f"entry {entry} has {len(entry)} coordinates, expected "
                    f"{self.arity + 1}"
                )
            if any(not 0 <= x < self.order for x in entry):
                raise ValueError(
                    f"entry {entry} is out of range for order {self.order}"
                )
        return self

    @field_serializer("entries")
    def _serialize_entries(self, entries: FrozenSet[Tuple[int, ...]]):
        return [list(entry) for entry in sorted(entries)]
