"""Exception types shared across the toolkit."""


class CrisisTopicsError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(CrisisTopicsError):
    """Invalid or inconsistent configuration (CLI exit code 2)."""


class CorpusFormatError(CrisisTopicsError):
    """Malformed corpus input; carries the offending line number when known."""

    def __init__(self, message: str, line_number: int | None = None):
        super().__init__(message)
        self.line_number = line_number


class EmbeddingFormatError(CrisisTopicsError):
    """Embedding file violates the binary format contract."""


class EmbeddingProviderError(CrisisTopicsError):
    """Embedding service failed after retries; carries failed batch indices."""

    def __init__(self, message: str, failed_batches: list[int] | None = None):
        super().__init__(message)
        self.failed_batches = failed_batches or []


class SchemaError(CrisisTopicsError):
    """Label schema, rule, or override file violates its contract."""


class StaleInputError(CrisisTopicsError):
    """Upstream stage artifacts are missing or changed since recorded
    (CLI exit code 3)."""

    def __init__(self, message: str, stage: str | None = None):
        super().__init__(message)
        self.stage = stage
