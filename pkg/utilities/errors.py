"""Custom exceptions for the detection toolkit."""


class ToolkitError(Exception):
    """Base class for every error raised by the toolkit."""

    pass


class VolumeFormatError(ToolkitError):
    """Raised when an MVOL header or payload cannot be read or written."""

    pass


class GeometryError(ToolkitError):
    """Raised for degenerate boxes or objects placed outside a volume."""

    pass


class InstanceNotFoundError(ToolkitError, KeyError):
    """Raised when a label instance is absent from a mask."""

    def __str__(self):
        # KeyError quotes its message; keep it readable.
        return str(self.args[0]) if self.args else ""


class LossDomainError(ToolkitError, ValueError):
    """Raised when a probability sits on a logarithm singularity."""

    pass


class UnknownSchemeError(ToolkitError, KeyError):
    """Raised when an augmentation scheme name is not known."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class DetectionError(ToolkitError):
    """Raised for malformed detection sets (missing scores, id mismatch)."""

    pass


class EvaluationError(ToolkitError):
    """Raised when an evaluation request cannot be answered."""

    pass


class TopologyError(ToolkitError):
    """Raised when a network topology cannot be planned."""

    pass


class ConfigError(ToolkitError):
    """Raised for invalid or unknown configuration entries."""

    pass


class PipelineStageError(ToolkitError):
    """Raised when a pipeline stage fails; names the failing stage."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"Stage '{stage}' failed: {cause}")


class AnnotationFormatError(ToolkitError):
    """Raised for malformed annotation or prediction CSV files."""

    pass
