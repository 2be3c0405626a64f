"""Exception hierarchy shared by the package and mapped to CLI exit codes."""


class HypercollapseError(Exception):
    pass


class InputError(HypercollapseError, ValueError):
    """Bad argument to a library call (unknown vertex, bad edge id, ...)."""


class ConfigurationError(HypercollapseError, ValueError):
    """Model or experiment parameters that cannot be run as requested."""


class ModelAssumptionError(HypercollapseError, ArithmeticError):
    """``beta'(t) + log(1 - t)`` has a zero before its first negative point."""
