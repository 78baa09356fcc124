"""Exception hierarchy shared by every annetto module."""

from __future__ import annotations


class AnnettoError(Exception):
    """Base class for all errors raised by this package."""


class TermError(AnnettoError, ValueError):
    """A malformed IRI or literal."""


class SchemaError(AnnettoError):
    """Inconsistent ontology definitions (e.g. a subclass cycle)."""


class UnknownTermError(AnnettoError, KeyError):
    """An IRI the schema knows nothing about."""

    def __init__(self, iri: object) -> None:
        super().__init__(f"unknown IRI: {iri}")
        self.iri = iri

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return self.args[0]


class BuildError(AnnettoError, ValueError):
    """A builder call that would produce an ill-formed knowledge base."""


class SyntaxErrorWithPosition(AnnettoError):
    """Parse failure carrying a 1-based line/column and the offending token."""

    def __init__(self, message: str, line: int, column: int, token: str | None = None) -> None:
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}"
        if token is not None:
            where += f" near {token!r}"
        super().__init__(f"{where}: {message}")


class TurtleSyntaxError(SyntaxErrorWithPosition):
    pass


class QuerySyntaxError(SyntaxErrorWithPosition):
    pass


class UnsupportedFeatureError(SyntaxErrorWithPosition):
    """A recognised but deliberately unsupported language construct."""

    def __init__(self, feature: str, line: int, column: int, token: str | None = None) -> None:
        self.feature = feature
        super().__init__(f"unsupported construct: {feature}", line, column, token)
