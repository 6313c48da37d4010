"""Exception types shared across the package."""


class DataError(ValueError):
    """Malformed or inconsistent input data (CLI exit code 3)."""


class NumericalError(RuntimeError):
    """Numerical failure such as an unrecoverable factorization (exit code 4)."""
