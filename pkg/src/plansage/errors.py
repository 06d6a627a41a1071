"""Exception hierarchy for catalog ingestion, scoring and the pipeline."""

from __future__ import annotations

from dataclasses import dataclass


class PlansageError(Exception):
    """Base class for all library errors."""


class MalformedFileError(PlansageError):
    """A catalog or ratings file could not be parsed at the structural level.

    Covers unreadable files, bad CSV/JSON syntax, and a header that does not
    match the documented column list. ``line`` is 1-based where known.
    """

    def __init__(self, path: str, message: str, line: int | None = None):
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class RowViolation:
    """One schema problem in one input row."""

    line: int
    field: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, {self.field}: {self.message}"


class SchemaViolationError(PlansageError):
    """One or more rows broke the record schema (bad enum, range, duplicate id)."""

    def __init__(self, path: str, violations: list[RowViolation]):
        self.path = path
        self.violations = violations
        head = violations[0]
        extra = f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""
        super().__init__(f"{path}: {head}{extra}")


class EmptyCatalogError(PlansageError):
    """The catalog file contained zero plan rows."""

    def __init__(self, path: str):
        self.path = path
        super().__init__(f"{path}: catalog contains no plan rows")


class SchemaMismatchError(PlansageError):
    """Two vectors with different encoding schema ids (or dimensions) were compared."""


class ZeroVectorError(PlansageError):
    """Cosine similarity is undefined when either vector has zero norm."""


class EmptyPreferenceError(PlansageError):
    """The preference encodes to the zero vector, which the cosine metric cannot score.

    Callers should ask the user to select at least one desired feature,
    a ward type or an eye care level, or switch to the distance metric.
    """


class NoCandidatesError(PlansageError):
    """No plan survived the location/tier pre-filter."""


@dataclass(frozen=True)
class FieldError:
    """A request-level validation problem tied to one field."""

    field: str
    message: str


class ValidationFailure(PlansageError):
    """A recommendation request failed validation; carries field-level messages."""

    def __init__(self, errors: list[FieldError]):
        self.errors = errors
        summary = "; ".join(f"{e.field}: {e.message}" for e in errors)
        super().__init__(summary or "invalid request")


class ConfigError(PlansageError):
    """The service configuration file is missing, unreadable or invalid."""
