"""Exception hierarchy shared by every module."""


class ProactError(Exception):
    """Base class for all errors raised by proact."""


class StructureError(ProactError):
    """A table does not define a structure of the declared kind."""


class ContractError(ProactError):
    """An input violates an operation's precondition (e.g. an action law)."""

    def __init__(self, message, *, level=None, law=None):
        super().__init__(message)
        self.level = level
        self.law = law


class ResourceError(ProactError):
    """A configured size or level bound was exceeded."""


class WordOverflow(ProactError):
    """A product in a bounded word arena left the length bound."""


class Inconclusive(ProactError):
    """A bounded search ran out of budget without a verdict."""

    def __init__(self, message, *, level=None, diagnostic=None):
        super().__init__(message)
        self.level = level
        self.diagnostic = diagnostic
