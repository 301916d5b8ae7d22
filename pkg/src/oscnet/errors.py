"""Shared exception types."""


class ContractViolation(RuntimeError):
    """An operation was called outside its documented contract."""


class ResourceLimit(RuntimeError):
    """A computation would exceed the desk-scale resource guards."""


class TruncationError(ContractViolation):
    """A Fock-space truncation would silently drop amplitude."""
