"""
Exception hierarchy shared by every module of the lab.

Each exception carries the process exit code the command-line front end reports
for it, so a failure deep inside an ensemble surfaces with the right status
without any translation table in the CLI.

Classes
-------
LabError
    Base class, exit code 1.
DomainError
    Invalid argument (outside the mathematical domain of an operation).
ConfigError
    Run configuration failed schema validation.
OutputError
    Reading or writing result files failed.
InvariantViolation
    A property that is exact mathematics at finite size did not hold.
ConvergenceError
    The QL iteration exceeded its sweep cap.
NumericError
    Floating point overflow that renormalization could not prevent.
InsufficientDataError
    Too few usable points for a decay fit.
PhaseFailure
    Wraps any failure raised while processing one phase sample.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


class LabError(Exception):
    """Base class for all lab errors."""

    exit_code = 1


class DomainError(LabError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(LabError):
    """A run configuration did not pass validation."""


class OutputError(LabError, OSError):
    """Result files could not be written or read."""

    exit_code = 2


class InvariantViolation(LabError):
    """
    An exact finite-dimensional property failed beyond floating point slack.

    Parameters
    ----------
    message : str
        Human readable description.
    failures : list of str, optional
        Individual failed checks, reported by the verification suite.
    """

    exit_code = 3

    def __init__(self, message: str, failures: list[str] | None = None) -> None:
        super().__init__(message)
        self.failures = list(failures or [message])


class ConvergenceError(LabError, ArithmeticError):
    """
    The implicit QL iteration did not converge.

    Parameters
    ----------
    index : int
        Index of the eigenvalue that was being isolated when the cap was hit.
    sweeps : int
        Number of sweeps spent.
    """

    def __init__(self, index: int, sweeps: int) -> None:
        super().__init__(f"QL iteration cap exceeded at index {index} after {sweeps} sweeps")
        self.index = index
        self.sweeps = sweeps


class NumericError(LabError, ArithmeticError):
    """Overflow or loss of finiteness in a numeric kernel."""


class InsufficientDataError(LabError):
    """A fit received fewer usable points than it requires."""


class PhaseFailure(LabError):
    """
    Failure while processing a single phase sample.

    Parameters
    ----------
    theta : float
        The phase at which the failure happened.
    cause : Exception
        The original exception.
    """

    def __init__(self, theta: float, cause: Exception) -> None:
        super().__init__(f"phase theta={theta!r} failed: {cause}")
        self.theta = theta
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", LabError.exit_code)


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
