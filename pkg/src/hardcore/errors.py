"""Shared exception types."""


class HardcoreError(Exception):
    """Base class for all library errors."""


class BudgetExceededError(HardcoreError):
    """An enumeration or solve exceeded its configured budget.

    Carries the count reached so callers can report how far they got.
    """

    def __init__(self, message: str, count: int):
        super().__init__(f"{message} (reached {count})")
        self.count = count


class DegenerateNormalizationError(HardcoreError):
    """A measure concentrated on the empty set has no RMS normalization."""


class EmptyEventError(HardcoreError):
    """Conditioning on an event of zero probability."""


class SamplerQualityError(HardcoreError):
    """A Monte Carlo estimate was aborted because sampler FAIL rates were too high."""
