"""Top-k most frequent document retrieval over a string collection."""

from ._tkdx import FormatError, Index, InputError

__all__ = ["Index", "InputError", "FormatError"]
