"""Exception types shared across the package.

Domain errors (bad data, violated invariants) all derive from MidasError so
callers can distinguish them from genuine bugs or I/O failures.
"""
from __future__ import annotations


class MidasError(Exception):
    """Base class for all domain errors raised by this package."""


class CorpusFormatError(MidasError):
    """A corpus file failed to parse or violated a model invariant.

    Renders as ``line:<n> field:<name> reason:<text>`` so CLI diagnostics are
    machine-greppable.
    """

    def __init__(self, line: int, field: str, reason: str):
        self.line = line
        self.field = field
        self.reason = reason
        super().__init__(f"line:{line} field:{field} reason:{reason}")


class ValidationError(MidasError):
    """An in-memory object violated a model invariant."""


class DuplicateIdError(ValidationError):
    """Two researchers or two publications share an identifier."""


class EmptyCorpusError(MidasError):
    """An operation that needs at least one researcher got an empty corpus."""


class ConfigError(MidasError):
    """A run or generator configuration is invalid."""


class StatsError(MidasError):
    """Base class for statistical-kernel errors."""


class DomainError(StatsError):
    """An argument is outside the mathematical domain of the function."""


class ConstantInputError(StatsError):
    """A sample without variation was passed to a test that requires spread."""


class DegenerateDataError(StatsError):
    """Pooled data is entirely tied, so the test statistic is undefined."""


class SampleSizeError(StatsError):
    """Sample size outside the supported range of the test."""


class CollinearInputError(StatsError):
    """Design points do not span a plane; the least-squares fit is rank-deficient."""


class MatchingError(MidasError):
    """Base class for matched-control construction errors."""


class PoolTooSmallError(MatchingError):
    """Fewer candidate controls than treated researchers."""


class OverlapError(MatchingError):
    """Treated and pool sets share researcher ids."""


class MissingAwardYearError(MatchingError):
    """Prize-year evaluation requested for a researcher without an award year."""
