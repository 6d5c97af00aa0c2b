"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class RumError(ValueError):
    """Base class for all errors raised by rumcheck."""


class NegativeProbability(RumError):
    pass


class SumNotOne(RumError):
    def __init__(self, menu, total):
        super().__init__(f"probabilities on menu {menu} sum to {total}, not 1")
        self.menu = menu
        self.total = total


class UnknownAlternative(RumError):
    pass


class DuplicateMenu(RumError):
    pass


class EmptyMenu(RumError):
    pass


class TooLarge(RumError):
    pass


class NotADistribution(RumError):
    pass


class IncompleteDomain(RumError):
    pass


class DimensionMismatch(RumError):
    pass


class DomainMismatch(RumError):
    pass


class InvalidCertificate(RumError):
    pass


class CyclicOrder(RumError):
    pass


class DegenerateArrangement(RumError):
    pass


class WrongDimension(RumError):
    pass


class ParseError(RumError):
    pass


class MethodDisagreement(RuntimeError):
    """Two solution methods returned different verdicts on the same input.

    This is an internal-consistency failure, never a property of the data.
    """
