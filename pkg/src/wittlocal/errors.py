"""Exceptions shared across the package."""


class WittlocalError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(WittlocalError):
    """Malformed element text, window syntax, or JSON input."""


class MixedAlgebras(WittlocalError):
    """Two operands belong to different algebras."""


class IndexOutOfDomain(WittlocalError):
    """A basis index falls outside the algebra's index domain."""


class TruncationTooSmall(WittlocalError):
    """A map table does not cover the indices a computation needs."""


class NotADerivation(WittlocalError):
    """A map table failed the internal consistency verification."""


class WindowTooSmall(WittlocalError):
    """A window does not contain the indices a computation needs."""
