"""Exception types shared across the package.

Every structured failure carries an ``exit_code`` so the command line
front end can map it without a lookup table: 2 for domain and
convergence problems, 3 for inputs that are too coarse or horizons that
are too short, 4 for deliberate resource caps.
"""


class ToolkitError(Exception):
    exit_code = 2


class DomainError(ToolkitError, ValueError):
    """Input outside an operation's documented domain."""


class PoleProximityError(DomainError):
    """Argument too close to the pole of zeta at 1 to evaluate reliably."""


class DivergenceError(DomainError):
    """The requested series or integral diverges for these parameters."""


class BoundaryAmbiguityError(ToolkitError):
    """A decimal input is too coarse to determine the next digit.

    The digits that *are* certain at the stated precision are attached
    as ``digits``.
    """

    exit_code = 3

    def __init__(self, message, digits=()):
        super().__init__(message)
        self.digits = tuple(digits)


class InsufficientHorizonError(ToolkitError):
    """A scan horizon ends before the point where the claim is certified."""

    exit_code = 3


class ResourceCapError(ToolkitError):
    """An enumeration would exceed the configured work cap."""

    exit_code = 4
