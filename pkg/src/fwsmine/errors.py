"""Exception and warning types shared across the pipeline."""


class FwsError(Exception):
    """Base class for all pipeline errors."""


class UnbalancedTagsError(FwsError, ValueError):
    """An ``<FW>`` opener without a closer, or vice versa."""


class InvalidRangeError(FwsError, ValueError):
    pass


class EmptyCorpusError(FwsError, ValueError):
    pass


class DimensionMismatchError(FwsError, ValueError):
    pass


class SingleClassError(FwsError, ValueError):
    """Raised when fewer than two classes are present in the training labels."""


class NonFiniteLossError(FwsError, ArithmeticError):
    """Training objective became NaN/inf; usually a learning rate that is too large."""


class LengthMismatchError(FwsError, ValueError):
    pass


class EmptyInputError(FwsError, ValueError):
    pass


class KTooLargeError(FwsError, ValueError):
    pass


class KeywordAbsentError(FwsError, LookupError):
    pass


class NoOverlapError(FwsError, ValueError):
    """No (base year, horizon) pair has data on both sides."""


class ConfigError(FwsError, ValueError):
    pass


class ClassTooSmallWarning(UserWarning):
    """A class has fewer examples than folds; stratification is degraded."""


class UndefinedMetricWarning(UserWarning):
    """Precision or recall had a zero denominator and was set to 0."""
