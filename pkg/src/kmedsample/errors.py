"""Exception types shared across the package.

The CLI maps these onto process exit codes: invalid input -> 2,
enumeration budget exceeded -> 3.
"""


class KmedsampleError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InvalidInputError(KmedsampleError):
    """Malformed data, out-of-range parameters, or unsupported combinations."""

    exit_code = 2


class BudgetExceededError(KmedsampleError):
    """An exhaustive enumeration would exceed its configured budget."""

    exit_code = 3


class InfeasibleConstraintError(KmedsampleError):
    """No solution satisfies the requested balance constraint."""

    exit_code = 2


class UndefinedErrorMeasure(KmedsampleError):
    """Relative error is undefined because the baseline cost is zero."""

    exit_code = 2
