"""Exception hierarchy shared by every stage of the analysis."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from units.core import Span


class UnitcheckError(Exception):
    """Base class for failures that stop an analysis and exit with status 2."""


class ParseError(UnitcheckError):
    """Lexer or parser failure with a source location."""

    def __init__(self, message: str, file: str, line: int, col: int, token: str | None = None):
        self.message = message
        self.file = file
        self.line = line
        self.col = col
        self.token = token
        where = f"{file}:{line}:{col}"
        found = f" (found {token!r})" if token is not None else ""
        super().__init__(f"{where}: syntax error: {message}{found}")


class UnitSyntaxError(UnitcheckError):
    """A unit expression does not follow the annotation unit grammar."""


class AnnotationError(UnitcheckError):
    """A `!= unit` comment is malformed; the annotation is reported and skipped."""

    def __init__(self, message: str, span: Span | None = None):
        self.message = message
        self.span = span
        super().__init__(message)


class AliasCycleError(UnitcheckError):
    """Unit aliases refer to each other in a cycle."""

    def __init__(self, names: list[str]):
        self.names = names
        super().__init__(f"cyclic unit aliases: {' -> '.join(names)}")


class AnalysisError(UnitcheckError):
    """Constraint generation rejected a construct."""

    def __init__(self, message: str, span: Span | None = None):
        self.message = message
        self.span = span
        where = f"{span.file}:{span.line}:{span.col}: " if span is not None else ""
        super().__init__(f"{where}{message}")


class UndeclaredIdentifier(AnalysisError):
    def __init__(self, name: str, span: Span | None = None, suggestions: list[str] | None = None):
        self.name = name
        self.suggestions = suggestions or []
        hint = f" (did you mean: {', '.join(self.suggestions)}?)" if self.suggestions else ""
        super().__init__(f"undeclared identifier '{name}'{hint}", span)


class ArityMismatch(AnalysisError):
    def __init__(self, name: str, expected: int, found: int, span: Span | None = None):
        self.name = name
        self.expected = expected
        self.found = found
        super().__init__(f"'{name}' expects {expected} argument(s), called with {found}", span)


class UnsupportedConstruct(AnalysisError):
    pass


class MissingDefinition(AnalysisError):
    def __init__(self, name: str, span: Span | None = None):
        self.name = name
        super().__init__(f"missing definition for '{name}' (no source, summary or intrinsic)", span)


class SummaryError(UnitcheckError):
    """A summary file could not be read, parsed or produced."""

    def __init__(self, message: str, path: str | None = None):
        self.message = message
        self.path = path
        prefix = f"{path}: " if path else ""
        super().__init__(f"{prefix}{message}")


class SummaryVersionError(SummaryError):
    def __init__(self, path: str, found: int, expected: int):
        self.found = found
        self.expected = expected
        super().__init__(f"unsupported fsmod version {found} (expected version {expected})", path)
