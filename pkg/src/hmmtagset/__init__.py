"""HMM part-of-speech tagging and tagset-condensation experiments."""

from hmmtagset.errors import DataError, InvariantError

__version__ = "0.1.0"

__all__ = ["DataError", "InvariantError", "__version__"]
