"""Exception hierarchy."""

from __future__ import annotations


class InjcertError(Exception):
    pass


class DomainError(InjcertError, ArithmeticError):
    """Evaluation left the domain of an operation (e.g. division by zero)."""


class DivisionByZeroInterval(DomainError):
    """Interval division with a denominator that contains zero."""


class ParseError(InjcertError, ValueError):
    """Malformed expression source.

    ``offset`` is the 0-based byte offset into the UTF-8 encoded source and
    ``expected`` the set of token kinds that would have been accepted there.
    """

    def __init__(self, message: str, offset: int = 0, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at byte {offset}{detail}")


class UnknownVariable(ParseError):
    pass


class NonIntegerExponent(ParseError):
    pass


class DimensionMismatch(InjcertError, ValueError):
    pass


class SingularA(InjcertError, ValueError):
    pass


class DegenerateWitness(InjcertError, ValueError):
    pass


class NotHolomorphic(InjcertError, ValueError):
    pass


class NoValidWitness(InjcertError):
    pass


class BudgetMisconfigured(InjcertError, ValueError):
    pass
