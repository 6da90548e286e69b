"""Exception types shared across the package."""


class BmoError(Exception):
    """Base class for all package errors."""


class ContractViolation(BmoError, ValueError):
    """An operation was called with arguments that break its contract."""


class FieldEvaluationError(BmoError, ArithmeticError):
    """A fitness field returned a non-finite value; the run must abort."""


class ConfigError(BmoError, ValueError):
    """An experiment config file is malformed or inconsistent."""
