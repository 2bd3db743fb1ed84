"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Input outside the region where a formula or construction is valid."""


class BranchError(DomainError):
    """Exact-boundary input handed to the general branch (alpha == 0 or beta == 0)."""


class ConvergenceError(RuntimeError):
    """Iterative or grid-based computation failed to reach its tolerance."""


class TruncationWarning(UserWarning):
    """A truncated series left more mass beyond the cutoff than allowed."""
