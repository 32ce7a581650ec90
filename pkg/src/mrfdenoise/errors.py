"""Exception types shared across the package."""


class PgmParseError(ValueError):
    """Raised when a PGM stream is malformed.

    :param message: human readable description of the defect.
    :param offset: byte offset into the stream where parsing failed.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class CapacityError(RuntimeError):
    """Raised when an exhaustive computation would exceed its size guard."""
