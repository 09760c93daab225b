"""Exception types shared across the package."""


class CapExceeded(ValueError):
    """A configured size cap would be exceeded; ``cap`` names which one."""

    def __init__(self, cap: str, message: str):
        super().__init__(message)
        self.cap = cap


class InvariantViolation(RuntimeError):
    """A theorem-backed invariant failed, which points at an upstream bug."""
