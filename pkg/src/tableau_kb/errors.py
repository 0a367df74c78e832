"""Exception hierarchy shared by the parsers and reasoners."""

from __future__ import annotations


class TableauKBError(Exception):
    """Base class for every error raised by this package."""


class SourceError(TableauKBError):
    """An input error that can be pinned to a line and column."""

    def __init__(self, message, line=None, column=None, expected=()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        super().__init__(self._render())

    def _render(self):
        loc = ""
        if self.line is not None:
            loc = f"{self.line}:{self.column}: "
        text = loc + self.message
        if self.expected:
            text += " (expected one of: " + ", ".join(self.expected) + ")"
        return text


class DLSyntaxError(SourceError):
    pass


class ArityError(SourceError):
    pass


class NameClashError(SourceError):
    """A name is used for two different kinds of symbol (concept, role, ...)."""


class TurtleSyntaxError(SourceError):
    pass


class MalformedListError(SourceError):
    pass


class UnsupportedConstructError(TableauKBError):
    pass


class UnsupportedAxiomError(TableauKBError):
    pass


class NonRegularRBoxError(TableauKBError):
    def __init__(self, message, cycle=()):
        self.cycle = tuple(cycle)
        super().__init__(message)


class UnsafeRuleError(TableauKBError):
    def __init__(self, message, variable=None):
        self.variable = variable
        super().__init__(message)


class InconsistentKBError(TableauKBError):
    pass


class ResourceLimitExceeded(TableauKBError):
    """Raised when a search hits its configured cap; the answer is unknown."""


class BudgetExceeded(ResourceLimitExceeded):
    def __init__(self, message, domain_size=None):
        self.domain_size = domain_size
        super().__init__(message)
