"""Exception types raised across the package.

All of them subclass ``ValueError`` so callers that only care about "bad
input" can catch that.
"""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedOrderError(ValueError):
    """A derivative order that is not available analytically was requested."""


class CapacityError(ValueError):
    """A dense model would exceed the configured dimension cap."""


class ConfigurationError(ValueError):
    """Invalid evolution, sweep or smoothing configuration."""


class IntegrityError(ValueError):
    """A state violates an invariant it must satisfy (e.g. unit norm)."""


class DegeneracyError(ValueError):
    """The reduced spectrum is degenerate, so the linearisation is singular."""


class ResolutionError(ValueError):
    """A sweep grid is too coarse for the requested analysis."""


class SweepError(RuntimeError):
    """One or more runs of a sweep failed; ``failures`` maps (path, T) to the error."""

    def __init__(self, failures):
        self.failures = dict(failures)
        lines = [f"{path} T={T:g}: {err}" for (path, T), err in self.failures.items()]
        super().__init__(f"{len(lines)} sweep run(s) failed:\n" + "\n".join(lines))
