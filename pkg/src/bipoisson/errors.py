"""Shared exception types."""


class CapExceededError(ValueError):
    """Ground-set size or word degree exceeds the configured cap."""


class ShapeMismatchError(ValueError):
    """Objects defined on incompatible ground sets / alphabets."""


class MissingEntryError(KeyError):
    """Dense table queried for a word it does not carry."""
