"""Exception hierarchy shared by the whole package.

The CLI maps these onto its exit codes: bad input -> 2, resource limits -> 3.
"""


class LabError(Exception):
    """Base class for all errors raised by rickart_lab."""


class SpecError(LabError):
    """Malformed textual input (group specs, theorem ids, ring files)."""


class InvalidOrderError(SpecError):
    """A cyclic order of 0 was requested (Z0 is not a finite group)."""


class DimensionError(LabError):
    """An element or matrix does not match the rank of its ambient group."""


class ContextError(LabError):
    """Operands belong to different ambient objects."""


class ResourceLimitError(LabError):
    """A configured enumeration bound was exceeded.

    Carries the bound so callers can report it; nothing is ever silently
    truncated.
    """

    def __init__(self, message: str, bound: int):
        super().__init__(f"{message} (bound: {bound})")
        self.bound = bound


class ConsistencyError(LabError):
    """An internal cross-validation failed; this always signals a bug."""
