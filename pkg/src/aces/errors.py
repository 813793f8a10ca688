"""Exception types shared across the engine."""


class AcesError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(AcesError):
    """Invalid or unsupported configuration value; names the offending field."""

    def __init__(self, field: str, message: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)


class InferenceError(AcesError):
    """A model backend failed to produce a prediction."""


class EmptyTextError(AcesError):
    """An operation that requires non-empty text received an empty string."""


class DimensionMismatchError(AcesError):
    """Two vectors of different dimensions were compared."""


class EmptyGroupError(AcesError):
    """A descriptor group or subtoken group that must be non-empty was empty."""


class OverlapOutOfRangeError(AcesError):
    """Overlap count outside [0, total_labels]."""


class EmptyReferencesError(AcesError):
    """Scoring requires at least one reference caption."""


class EmptyCorpusError(AcesError):
    """Corpus-level aggregation over zero score reports."""


class NonFiniteScoreError(AcesError):
    """A pairwise judgement received NaN or infinite scores."""


class MetricEvaluationError(AcesError):
    """A metric failed while scoring a benchmark item; chains the cause."""


class ParseError(AcesError):
    """A data file could not be parsed; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ValidationError(AcesError):
    """A parsed record violates the schema; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")
