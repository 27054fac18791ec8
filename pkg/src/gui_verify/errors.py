"""Exception hierarchy.

Every error raised by the library derives from :class:`GuiVerifyError` and
carries a stable, machine-readable ``code``.
"""

from __future__ import annotations


class GuiVerifyError(Exception):
    code = "ERROR"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.details = details

    def __str__(self) -> str:
        return f"{self.code}: {self.args[0]}"


class MalformedDocument(GuiVerifyError):
    code = "MALFORMED_DOCUMENT"


class SchemaViolation(GuiVerifyError):
    code = "SCHEMA_VIOLATION"


class EmptyScreen(GuiVerifyError):
    code = "EMPTY_SCREEN"


class DecodeError(GuiVerifyError):
    code = "DECODE_ERROR"


class ZeroDimension(GuiVerifyError):
    code = "ZERO_DIMENSION"


class DimensionMismatch(GuiVerifyError):
    code = "DIMENSION_MISMATCH"


class OutOfBounds(GuiVerifyError):
    code = "OUT_OF_BOUNDS"


class EmptyRegion(GuiVerifyError):
    code = "EMPTY_REGION"


class EmptyHistogram(GuiVerifyError):
    code = "EMPTY_HISTOGRAM"


class UnknownCategory(GuiVerifyError):
    code = "UNKNOWN_CATEGORY"


class VersionMismatch(GuiVerifyError):
    code = "VERSION_MISMATCH"


class ReportIOError(GuiVerifyError):
    code = "IO_ERROR"


class TargetNotFound(GuiVerifyError):
    code = "TARGET_NOT_FOUND"


class MutationOutOfBounds(GuiVerifyError):
    code = "MUTATION_OUT_OF_BOUNDS"


class InsufficientTargets(GuiVerifyError):
    code = "INSUFFICIENT_TARGETS"


class ConfigError(GuiVerifyError):
    code = "CONFIG_ERROR"
