"""Exception hierarchy shared by every stage of the pipeline.

Each class carries the CLI exit code it maps to, so ``cli.main`` can turn any
failure into the right status without a lookup table.
"""


class JobMarketError(Exception):
    exit_code = 1


class ValidationError(JobMarketError, ValueError):
    """Bad input: an invalid profile field, config value or argument."""

    exit_code = 2


class ParseError(ValidationError):
    def __init__(self, message, text=None):
        super().__init__(message)
        self.text = text


class SchemaError(ValidationError):
    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = list(missing)


class ListingValidationError(ValidationError):
    """One or more CSV rows violate the listing invariants.

    ``violations`` is a list of ``(row_number, message)`` pairs; row numbers
    are 1-based data rows (the header is row 0).
    """

    def __init__(self, violations):
        self.violations = list(violations)
        head = "; ".join(f"row {r}: {m}" for r, m in self.violations[:5])
        more = len(self.violations) - 5
        if more > 0:
            head += f"; ... ({more} more)"
        super().__init__(f"{len(self.violations)} invalid listing row(s): {head}")


class DomainError(ValidationError):
    """Input outside a function's mathematical domain (constant target,
    coincident centroids, coordinates off the globe)."""


class StateError(JobMarketError, RuntimeError):
    """An operation needs a fitted artifact that is missing."""

    exit_code = 2


class DependencyError(JobMarketError):
    """An upstream pipeline stage has not produced its artifacts yet."""

    exit_code = 3

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class StaleArtifactError(DependencyError):
    """Artifacts on disk no longer match the hashes recorded in a manifest."""


class NumericalError(JobMarketError, ArithmeticError):
    exit_code = 4
