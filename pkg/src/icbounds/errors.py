"""Exception types shared across the package.

The CLI maps these onto exit codes: input/shape problems exit 2,
undefined quantities exit 3, regime violations exit 4.
"""


class InputError(ValueError):
    """Malformed or invariant-violating input (channel spec, config, table)."""


class DegenerateChannelError(InputError):
    """Channel gains make a required derived quantity undefined."""


class ChannelShapeError(InputError):
    """Channel does not have the structure an operation requires."""


class UndefinedThresholdError(Exception):
    """A regime threshold involves a division by zero."""


class RegimeViolationError(Exception):
    """Channel fails the regime condition an evaluator assumes."""


class UnboundedRegionError(InputError):
    """Constraint set does not bound the rate region in some direction."""


class NumericalError(ArithmeticError):
    """Covariance degenerated beyond what ridge regularization can absorb."""


class ResourceLimitError(RuntimeError):
    """Requested simulation exceeds the configured codebook cap."""
