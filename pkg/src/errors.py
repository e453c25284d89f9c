"""
Exception hierarchy for the edgelighter toolkit
"""


class EdgelighterError(Exception):
    """Base class for all toolkit errors"""


class InvalidParameterError(EdgelighterError, ValueError):
    """A parameter is outside its valid range"""


class DimensionMismatchError(InvalidParameterError):
    """Graphs, permutations or matrices disagree on size"""


class InstanceTooLargeError(EdgelighterError):
    """An exact (exhaustive) computation was asked for on a too-large instance"""


class ReducibleChainError(EdgelighterError):
    """Chain parameters make the chain reducible, so no unique stationary law exists"""


class MixingNotReachedError(EdgelighterError):
    """Worst-start TV distance did not drop below epsilon within the step cap"""


class UndefinedCorrelationError(EdgelighterError):
    """Correlation requested for an indicator sample with a constant margin"""


class ConfigError(EdgelighterError):
    """Configuration file or preset could not be used"""


class DataError(EdgelighterError):
    """Input network or label data is malformed"""


class SeedViolationError(EdgelighterError):
    """A solver returned a permutation that moves a seed"""
