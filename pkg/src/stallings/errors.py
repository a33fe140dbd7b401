"""Exception types shared across the package."""


class StallingsError(Exception):
    """Base class for errors raised by this package."""


class ParseError(StallingsError):
    """Malformed word, graph, core, or morphism text."""


class DomainError(StallingsError):
    """Structurally valid input that violates an operation's contract."""


class RankMismatchError(DomainError):
    """Objects over ambient free groups of different ranks were combined."""
