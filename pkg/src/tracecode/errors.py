"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument lies outside the domain an operation accepts."""


class ConstructionError(RuntimeError):
    """A randomized construction ran out of attempts."""


class DecodeFailure(Exception):
    """A decoder could not produce a message."""
