"""Exception types shared across the package."""


class WsecError(Exception):
    """Base class for package-specific failures."""


class FormatError(WsecError):
    """A serialized artifact does not match its expected text format."""


class SingularMatrixError(WsecError):
    """Inversion or solving hit a singular matrix; carries the achieved rank."""

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank
