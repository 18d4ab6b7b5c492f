"""Exception hierarchy shared by every stage.

Each class carries a distinct process exit code so the CLI can map
failures to diagnosable statuses.
"""


class EngineError(Exception):
    exit_code = 1


class ConfigError(EngineError):
    exit_code = 2


class InputError(EngineError):
    """Malformed or unreadable input (files, empty texts)."""

    exit_code = 3


class StructuralIntegrityError(EngineError):
    """An edge references a node id that does not exist."""

    exit_code = 4


class StageOrderError(EngineError):
    """A stage ran before its prerequisite (e.g. merge before embed)."""

    exit_code = 5


class ProviderUnavailableError(EngineError):
    """Sidecar unreachable after retries."""

    exit_code = 6

    def __init__(self, message, retries=0):
        super().__init__(message)
        self.retries = retries


class DegenerateEmbeddingError(EngineError):
    """Zero-norm vector where a direction is required."""

    exit_code = 7


class ShapeError(EngineError):
    exit_code = 8


class NumericalError(EngineError):
    """Divergence or failure to converge; carries the offending step."""

    exit_code = 9

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class DegenerateSpectrumError(EngineError):
    """Rescaling requested with lambda_max <= 0."""

    exit_code = 10


class KGLookupError(EngineError):
    """Unknown entity id used as a neighborhood root."""

    exit_code = 11
