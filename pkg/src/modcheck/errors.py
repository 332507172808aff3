"""Exception hierarchy shared by every module.

The CLI maps ``UsageError`` to exit status 2; everything else that escapes a
command is a mathematical failure of the inputs.
"""


class ModcheckError(Exception):
    pass


class UsageError(ModcheckError, ValueError):
    """Caller passed incompatible or malformed arguments."""


class DomainError(ModcheckError, ArithmeticError):
    """The operation is undefined at this input (division by zero, s <= 1, ...)."""


class ResourceError(ModcheckError):
    """An enumeration would exceed the configured bound."""


class SingularModelError(ModcheckError, ValueError):
    """A cubic with a repeated root was supplied where an elliptic curve is required."""


class ModelError(ModcheckError, ValueError):
    """The curve model violates an assumption (e.g. not minimal at p)."""


class CoverageError(ModcheckError, ValueError):
    """A prime needed for an expansion has no local data."""


class AccuracyError(ModcheckError):
    """A numerical evaluation cannot meet its truncation-error guarantee."""
