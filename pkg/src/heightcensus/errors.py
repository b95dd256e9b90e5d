"""Exception hierarchy shared by every module.

Exit-code mapping used by the CLI: UsageError -> 2, BudgetExceeded and
PrecisionExhausted -> 3, VerificationFailure (a verified counterexample,
which would falsify the implementation, not the theory) -> 1.
"""


class HeightCensusError(Exception):
    """Base class for all library errors."""


class UsageError(HeightCensusError):
    """Caller violated a documented precondition or passed malformed input."""


class PrecisionExhausted(HeightCensusError):
    """An adaptive comparison was still undecided at the precision cap."""

    def __init__(self, message, bits=None):
        super().__init__(message)
        self.bits = bits


class BudgetExceeded(HeightCensusError):
    """A candidate scan would exceed the configured budget.

    Carries the partial statistics gathered so far; a scan is never
    silently truncated.
    """

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})


class VerificationFailure(HeightCensusError):
    """A verified counterexample to a claimed inclusion or inequality.

    Raising this means the implementation contradicted an exactly checked
    consequence; the certificate payload pins down where.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = dict(certificate or {})


class LiouvilleViolation(VerificationFailure):
    """A certified value sat strictly below its Liouville floor."""
