"""Exception types shared across the package."""


class ChainError(ValueError):
    """Invalid chain description or spin index."""


class ConvergenceError(RuntimeError):
    """An iterative eigensolver exhausted its iteration budget."""


class CrossCheckError(ArithmeticError):
    """Two independent evaluations of the same quantity disagree."""
