class DataError(ValueError):
    """Bad input data: malformed files, empty corpora, inconsistent tags."""


class InvariantError(RuntimeError):
    """An internal consistency check failed."""
