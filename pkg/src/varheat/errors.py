"""Exception hierarchy for the varheat package.

Every error raised on a numerical or contract violation derives from
:class:`VarheatError`, so callers can catch one type at the CLI boundary.
Configuration problems use :class:`ConfigError` (separate exit code).
"""


class VarheatError(Exception):
    """Base class for all numerical / contract errors in this package."""


class DomainError(VarheatError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class NonPositiveConductivity(VarheatError, ValueError):
    """A conductivity sample is zero or negative somewhere on [0, 1]."""


class MalformedTable(VarheatError, ValueError):
    """A tabulated coefficient file violates its format contract."""


class ToleranceNotReached(VarheatError):
    """Adaptive refinement hit its cap before meeting the tolerance."""


class OrderTooHigh(VarheatError, ValueError):
    """A simplex-integral order exceeds the configured cap (cost ~ Q**n)."""


class ShiftTooSmall(VarheatError, ValueError):
    """Regularization shift below the travel-time span; overflow risk."""


class RootMissed(VarheatError):
    """The bracketing scan found fewer sign changes than modes requested."""


class NoConvergence(VarheatError):
    """An iterative solver failed to converge."""


class DenominatorNearZero(VarheatError):
    """The contour passes too close to a zero of the denominator."""


class TailTooLarge(VarheatError):
    """The contour truncation radius is insufficient for the given time."""


class SingularPartition(VarheatError, ValueError):
    """An interface partition has a zero-width or disordered cell."""


class TooManyTerms(VarheatError, ValueError):
    """A brute-force enumeration would exceed its term budget."""


class ConfigError(Exception):
    """A run configuration file or CLI option is invalid (exit code 2)."""
