"""Exception types shared across the package."""


class CritPercError(Exception):
    """Base class for all errors raised by critperc."""


class DomainError(CritPercError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PoleError(DomainError):
    """Evaluation requested at (or numerically too close to) a pole."""


class ConvergenceError(CritPercError, ArithmeticError):
    """An iterative or series computation failed to converge."""


class PreconditionError(CritPercError, ValueError):
    """A structural precondition on the arguments is violated."""


class ImaginaryResidueError(CritPercError, AssertionError):
    """A quantity that must be real came out with a non-negligible imaginary part."""
