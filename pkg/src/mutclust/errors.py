"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed user input: bad file contents, dimensions, or parameters."""


class ConvergenceError(RuntimeError):
    """Iterative solve exhausted its budget before reaching feasibility.

    Carries the last iterate and its worst constraint violation so callers
    can inspect how close the solve got.
    """

    def __init__(self, message, x=None, max_violation=None, iterations=None):
        super().__init__(message)
        self.x = x
        self.max_violation = max_violation
        self.iterations = iterations
