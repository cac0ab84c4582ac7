"""Exceptions raised by the serene core."""


class SereneError(Exception):
    """Base exception for serene operations."""
    pass


class TableError(SereneError, ValueError):
    """Malformed table, complex or partial cube, or an element id out of range."""
    pass


class PreconditionError(SereneError):
    """An operation was called on an input that does not meet its contract."""
    pass


class UnknownNameError(SereneError, LookupError):
    """Unknown builtin table or fixture name."""

    def __init__(self, kind: str, name: str, available: list[str]):
        self.name = name
        self.available = available
        super().__init__(
            f"Unknown {kind} '{name}'. Available: {', '.join(available)}"
        )


class FaceLookupError(SereneError, LookupError):
    """Face is not a face of the complex."""
    pass


class ChartDomainError(SereneError):
    """Chart coordinates outside the open bipyramid."""
    pass


class OrientationError(SereneError):
    """Two facets claim the same oriented tuple."""

    def __init__(self, ridge: tuple, message: str | None = None):
        self.ridge = ridge
        super().__init__(message or f"Orientation is incoherent across ridge {ridge}")


class InternalConsistencyError(SereneError):
    """A verified invariant failed; indicates a bug rather than bad input."""
    pass


class CompletionCapError(SereneError):
    """The next free completion level would exceed the element cap."""

    def __init__(self, projected: int, cap: int):
        self.projected = projected
        self.cap = cap
        super().__init__(
            f"Next level would hold {projected} elements, above the cap of {cap}"
        )


class ClassificationError(SereneError):
    """Component cannot be classified as a closed orientable surface."""
    pass
