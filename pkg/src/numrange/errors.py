"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain.

    The message names the violated precondition; the CLI maps this
    exception family to exit code 3.
    """


class MatrixFileError(ValueError):
    """A matrix file is missing, malformed, or inconsistent (CLI exit code 2)."""
