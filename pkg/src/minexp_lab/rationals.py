"""Exact rational scalars, plus a first-class infinity.

All arithmetic in this package is exact: scalars are ``fractions.Fraction``
(never floats), and the single extra value ``INF`` compares greater than
every finite rational.  ``INF`` only ever shows up as the minimal exponent
of a smooth model; it supports ordering and serialization, nothing else.
"""

from __future__ import annotations

from fractions import Fraction


class Infinity:
    """Positive infinity for the total order on exact rationals."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __hash__(self):
        return hash("minexp_lab.INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, Infinity)

    def __gt__(self, other):
        return not isinstance(other, Infinity)

    def __ge__(self, other):
        return True


INF = Infinity()

Rat = Fraction  # finite values; Rat | Infinity where INF can occur


class InputError(ValueError):
    """Malformed or out-of-contract input (CLI exit code 1)."""


class VerificationError(AssertionError):
    """An exact identity the artifact is supposed to certify failed."""


def parse_rational(text):
    """Parse "p/q", an integer string, or "inf"."""
    s = text.strip()
    if s == "inf":
        return INF
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r}") from exc


def format_rational(x) -> str:
    if isinstance(x, Infinity):
        return "inf"
    return str(Fraction(x))
