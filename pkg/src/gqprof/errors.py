"""Exception types raised by gqprof."""

from __future__ import annotations


class GqprofError(Exception):
    """Base class for all gqprof errors."""


class InvalidParameterError(GqprofError, ValueError):
    """A parameter is outside its documented domain (bad q, wrong gram length, ...)."""


class SlpFormatError(GqprofError, ValueError):
    """A grammar is malformed: bad syntax, bad references, unreachable rules."""


class CounterOverflowError(GqprofError, OverflowError):
    """A 64-bit counter would overflow."""


class CollisionError(GqprofError):
    """The fingerprint function kept colliding after every allowed retry."""

    def __init__(self, message: str, reports=()):
        super().__init__(message)
        self.reports = list(reports)


U64_MAX = (1 << 64) - 1


def checked_add(a: int, b: int, what: str = "counter") -> int:
    s = a + b
    if s > U64_MAX:
        raise CounterOverflowError(f"{what} exceeds 64 bits ({a} + {b})")
    return s


def checked_mul(a: int, b: int, what: str = "counter") -> int:
    s = a * b
    if s > U64_MAX:
        raise CounterOverflowError(f"{what} exceeds 64 bits ({a} * {b})")
    return s
