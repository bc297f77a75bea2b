"""Exception types shared across the engine."""


class EngineError(RuntimeError):
    """Base class for all engine errors."""


class ConsistencyError(EngineError):
    """An identity that must hold by the underlying theory failed.

    These are never caught internally: a ConsistencyError means either a
    transcription bug in the combinatorial model or a genuinely broken
    expectation, and the caller is expected to surface it loudly.
    """

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = dict(details)


class NotInSpanError(ConsistencyError):
    """A vector expected to lie in a span did not."""
