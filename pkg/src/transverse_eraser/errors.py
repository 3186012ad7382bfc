"""Exception types, split by the CLI exit code they map to."""


class EraserError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigurationError(EraserError, ValueError):
    """Invalid parameters, geometry or configuration text."""

    exit_code = 1


class NumericalGuardError(EraserError, ArithmeticError):
    """A sampling or numerical guard refused to run (aliasing, resolution)."""

    exit_code = 2
