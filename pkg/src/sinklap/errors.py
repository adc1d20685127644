"""Exception types shared across the library."""


class DegenerateInputError(ValueError):
    """Input matrix or dataset violates a structural precondition.

    Raised for things a scaling cannot recover from, e.g. an affinity
    matrix with an all-zero row (isolated vertex).
    """


class NumericalFailureError(RuntimeError):
    """An iteration produced non-finite or out-of-domain values.

    Parameters
    ----------
    message : str
        Human-readable description.
    iteration : int or None
        1-based iteration index at which the failure occurred, when the
        failure happened inside an iterative solver.
    """

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class UsageError(Exception):
    """Bad command line or config-file input (maps to exit code 1)."""
