class LrdEntropyError(Exception):
    pass


class ValidationError(LrdEntropyError, ValueError):
    """A parameter violates a documented precondition."""
    pass


class DivergentSeriesError(ValidationError):
    pass


class NotCoveredError(ValidationError):
    """Parameters fall outside every limit-theorem case region."""
    pass


class UnsupportedBandwidthRuleError(ValidationError):
    pass


class TooFewSamplesError(ValidationError):
    pass


class NonPositiveEstimateError(LrdEntropyError):
    pass
