"""
Exception types raised by the klgrowth engine.

Library code raises these and never exits; the CLI maps them onto exit codes.
"""


class KLGrowthError(Exception):
    """Base class for all engine errors."""


class DomainError(KLGrowthError, ValueError):
    """An argument lies outside the domain of an operation (bad type, rank, element...)."""


class TruncationError(KLGrowthError):
    """An element or truncation window reaches beyond the built length bound."""


class ResourceCapError(KLGrowthError):
    """A configured element-count or table-volume cap was exceeded."""


class PositivityError(KLGrowthError, AssertionError):
    """A Kazhdan-Lusztig polynomial came out with a negative coefficient."""
