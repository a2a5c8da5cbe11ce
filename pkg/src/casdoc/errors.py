"""Exception types and the shared diagnostic record.

Every stage of the conversion pipeline raises a subclass of CasdocError so
callers (the CLI, the service) can distinguish "your input is broken" from
genuine bugs. Stages that can report several independent problems at once
(graph building, linting) carry a list of Diagnostic records instead of
bailing on the first one.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Diagnostic:
    """One machine-readable finding about an input.

    severity is "error" (blocks rendering), "warning", or "info".
    code is a short stable slug such as "dangling-anchor"; line is the
    1-based source line when one is known, else None.
    """

    severity: str
    code: str
    message: str
    line: int | None = None

    def format(self, filename: str = "-") -> str:
        line = self.line if self.line is not None else 0
        return f"{filename}:{line}: {self.code} {self.message}"


class CasdocError(Exception):
    """Base class for everything this package raises on bad input."""


class SourceError(CasdocError):
    """The input file could not be read or decoded."""


class AnnotationSyntaxError(CasdocError):
    """Lexical problem in the host source, e.g. an unterminated comment."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


class GrammarError(CasdocError):
    """An annotation entry violates the entry grammar."""

    def __init__(self, message: str, *, comment_index: int, entry_index: int, line: int | None = None):
        where = f"comment {comment_index}, entry {entry_index}"
        super().__init__(f"{where}: {message}")
        self.reason = message
        self.comment_index = comment_index
        self.entry_index = entry_index
        self.line = line


class DatabaseError(CasdocError):
    """The annotation database directory is malformed."""


class IncludeError(CasdocError):
    """An include directive names an id the database does not have."""

    def __init__(self, ref: str, *, comment_index: int, entry_index: int):
        super().__init__(
            f"comment {comment_index}, entry {entry_index}: "
            f"include references unknown database id {ref!r}"
        )
        self.ref = ref
        self.comment_index = comment_index
        self.entry_index = entry_index


class AnchorError(CasdocError):
    """An anchor declaration does not resolve against the clean code."""

    def __init__(self, message: str, *, code: str = "dangling-anchor", line: int | None = None):
        super().__init__(message)
        self.code = code
        self.line = line


class GraphError(CasdocError):
    """Aggregate of all errors found while building or validating a graph."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        summary = "; ".join(d.message for d in self.diagnostics[:3])
        extra = len(self.diagnostics) - 3
        if extra > 0:
            summary += f" (and {extra} more)"
        super().__init__(summary or "invalid document graph")


class IndexFormatError(CasdocError):
    """The API reference index file is not in the expected shape."""


class StateDecodeError(CasdocError):
    """A saved-state URL fragment could not be decoded."""


class StatsError(CasdocError):
    """A statistic is undefined for the given data (zero variance etc.)."""


class IngestError(CasdocError):
    """An event batch was rejected; nothing from it was stored."""


class ConfigError(CasdocError):
    """The analysis configuration is missing, unreadable, or inconsistent."""


@dataclass
class DiagnosticList:
    """Mutable accumulator used by stages that collect many findings."""

    items: list[Diagnostic] = field(default_factory=list)

    def error(self, code: str, message: str, line: int | None = None) -> None:
        self.items.append(Diagnostic("error", code, message, line))

    def warning(self, code: str, message: str, line: int | None = None) -> None:
        self.items.append(Diagnostic("warning", code, message, line))

    def info(self, code: str, message: str, line: int | None = None) -> None:
        self.items.append(Diagnostic("info", code, message, line))

    def extend(self, diagnostics) -> None:
        self.items.extend(diagnostics)

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.items if d.severity == "error"]

    def __bool__(self) -> bool:
        return bool(self.items)
