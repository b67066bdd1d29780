"""Exception taxonomy shared by all spatialui modules."""


class SpatialUIError(Exception):
    """Base class for all errors raised by this package."""


class NotFoundError(SpatialUIError):
    """A referenced node or component does not exist (or is hidden)."""


class InvalidArgumentError(SpatialUIError):
    """An argument violates an operation's preconditions."""


class InvalidStateError(SpatialUIError):
    """Operation called on an object in the wrong lifecycle state."""


class NotGrabbableError(SpatialUIError):
    """Attempted to grab a node that is not flagged grabbable."""


class ProtocolError(SpatialUIError):
    """Frame/stream ordering violated (stale or out-of-order input)."""


class FormatError(SpatialUIError):
    """A file or wire payload could not be parsed.

    ``line`` is the 1-based line number when the failure is localized.
    """

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class OutOfDomainError(SpatialUIError):
    """Coordinates outside the supported projection domain."""


class UnsupportedVersionError(SpatialUIError):
    """Persisted document has a version this build cannot read."""


class UnsupportedFormatError(FormatError):
    """File is recognizably the wrong flavor (e.g. binary PLY)."""


class TruncatedFileError(FormatError):
    """File ends before the element count declared in its header."""
