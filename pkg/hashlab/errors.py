"""
Exception hierarchy for the hashing laboratory.

Library code raises these; the CLI, the dashboard pages and the workflow
nodes are the only places that catch them.
"""


class LabError(Exception):
    """Base class for every error raised by the laboratory."""

    exit_code = 1


class DomainError(LabError):
    """An argument lies outside the mathematical domain of an operation."""

    exit_code = 1


class StructuralError(DomainError):
    """Elements from two different algebras were combined."""


class UnsupportedError(DomainError):
    """The operation is not defined for this structure (e.g. inverse in a ring)."""


class CertificateError(LabError):
    """A witness failed the check that is part of its construction."""

    exit_code = 1


class CapacityError(LabError):
    """A computation would exceed its configured budget or table size."""

    exit_code = 2

    def __init__(self, message, count=None, budget=None):
        super().__init__(message)
        self.count = count
        self.budget = budget


class UsageError(LabError):
    """Malformed command line or family spec string."""

    exit_code = 3
