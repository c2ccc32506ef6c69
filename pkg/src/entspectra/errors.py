"""Exception types shared across the package.

Every exception carries a short machine-readable ``code`` (e.g.
``"NOT_HERMITIAN"``) so callers such as the CLI can map failures to exit
codes without parsing messages.
"""


class EntSpectraError(Exception):
    """Base class for all package errors."""

    code = "ERROR"

    def __init__(self, message, code=None):
        if code is not None:
            self.code = code
        super().__init__(f"{self.code}: {message}")


class InvalidInputError(EntSpectraError, ValueError):
    """Input violates an operation's precondition."""

    code = "INVALID_INPUT"


class NumericalError(EntSpectraError, ArithmeticError):
    """A numerical procedure failed or a residual exceeded its bound."""

    code = "NUMERICAL_FAILURE"


class ReductionViolatedError(InvalidInputError):
    """The state does not satisfy the A-side reduction inequality."""

    code = "REDUCTION_VIOLATED"


class WitnessInvalidError(EntSpectraError):
    """A majorization witness failed re-verification.

    Attributes
    ----------
    check : str
        Name of the first check that failed.
    """

    code = "WITNESS_INVALID"

    def __init__(self, check, message):
        self.check = check
        super().__init__(f"{check}: {message}")
