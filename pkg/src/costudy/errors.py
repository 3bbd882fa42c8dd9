"""Exception types shared across the engine."""


class CoStudyError(Exception):
    """Base class for all engine errors."""


class ConfigError(CoStudyError):
    """Invalid session, provider, or server configuration."""


class TranscriptParseError(CoStudyError):
    """Transcript text could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class PayloadError(CoStudyError):
    """An inbound event payload failed validation; carries the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ProviderError(CoStudyError):
    """A provider call failed. ``retryable`` hints whether another attempt may help."""

    def __init__(self, message: str, retryable: bool = False):
        super().__init__(message)
        self.retryable = retryable


class EmptyReplyError(CoStudyError):
    """The model returned an empty completion, or an action tag with no body."""


class UnknownFeatureError(CoStudyError):
    """Usage recording was asked for a feature outside the counter set."""
