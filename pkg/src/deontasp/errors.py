"""Exception hierarchy shared by all subpackages."""

from __future__ import annotations

from dataclasses import dataclass


class DeontaspError(Exception):
    """Base class for every error raised by this package."""


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    column: int
    end_line: int
    end_column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    span: Span

    def __str__(self) -> str:
        return f"{self.span}: {self.severity}: {self.message}"


class AspSyntaxError(SyntaxError, DeontaspError):
    """Parse failure; always carries a :class:`Diagnostic` with a source span."""

    def __init__(self, diagnostic: Diagnostic, text: str | None = None):
        span = diagnostic.span
        super().__init__(diagnostic.message, (span.file, span.line, span.column, text))
        self.diagnostic = diagnostic

    def __str__(self) -> str:
        return str(self.diagnostic)


class UnsafeRule(DeontaspError):
    def __init__(self, rule, variable: str):
        super().__init__(f"unsafe variable {variable} in rule: {rule}")
        self.rule = rule
        self.variable = variable


class GroundingExplosion(DeontaspError):
    """Ground instance count went past the configured cap."""


class BaseTooLarge(DeontaspError):
    """Answer-set search visited more candidates than the enumeration cap allows."""


class Inconsistent(DeontaspError):
    """The program has no answer set."""


class CyclicPreferences(DeontaspError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("preference cycle: " + " > ".join(map(str, self.cycle + self.cycle[:1])))


class MalformedSpec(DeontaspError):
    pass


class VocabularyCollision(MalformedSpec):
    pass


class SchemaError(DeontaspError):
    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


class IllegalAction(DeontaspError):
    pass


class LayoutError(DeontaspError):
    pass
