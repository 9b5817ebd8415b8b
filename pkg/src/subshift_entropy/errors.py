"""Exception hierarchy shared by every module."""


class SubshiftError(Exception):
    """Base class for all errors raised by this package."""


class ResourceError(SubshiftError):
    """A computation would exceed a configured budget.

    Carries enough context for callers to see *why* the request is
    infeasible instead of silently getting a truncated answer.
    """

    def __init__(self, message, *, required=None, budget=None, stage=None):
        super().__init__(message)
        self.required = required
        self.budget = budget
        self.stage = stage


class BudgetExceeded(ResourceError):
    """Enumeration or graph construction would exceed its budget."""


class SpectralStall(ResourceError):
    """Collatz-Wielandt iteration failed to reach the requested width."""


class StageUndecided(ResourceError):
    """Entropy bounds too loose to decide a realization stage."""


class EmptySubshiftError(SubshiftError):
    """Entropy is undefined for the empty subshift."""


class InvalidSpecError(SubshiftError, ValueError):
    """A subshift description could not be parsed or is inconsistent."""
