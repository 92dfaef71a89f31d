"""Exception types shared across the workbench."""


class VlabError(Exception):
    pass


class PrecisionError(VlabError, ArithmeticError):
    """The stored precision does not determine the requested answer."""


class UnsupportedConfiguration(VlabError):
    """The request is mathematically meaningful but outside the supported fragment."""


class ReducibleModulus(VlabError, ValueError):
    """A would-be minimal polynomial factors; ``factor`` holds the factor found."""

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class NoRootError(VlabError):
    """An equation has no solution in the represented field."""


class HenselConditionError(VlabError, ValueError):
    pass
