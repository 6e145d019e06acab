"""Exception hierarchy."""


class NetctrlError(Exception):
    """Base class for all package errors."""


class InputError(NetctrlError, ValueError):
    """Malformed or non-finite input."""


class ValidationError(InputError):
    """A network description violates its dimensional invariants.

    ``problems`` holds one human-readable line per violation.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ComputationError(NetctrlError, RuntimeError):
    """A numerical kernel (SVD, eigensolver) failed to converge."""
