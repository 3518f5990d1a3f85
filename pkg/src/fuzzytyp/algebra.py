"""Exact truth-degree arithmetic and the combination functions of the
four supported fuzzy logic families.

Degrees are plain ``fractions.Fraction`` values in [0, 1]; equality and
ordering are exact, there is no epsilon anywhere in this package.

Combination functions per family:

=============  ==============  ==============  ======================  ============
family         a (x) b         a (+) b         a |> b                  (-) a
=============  ==============  ==============  ======================  ============
zadeh          min(a, b)       max(a, b)       max(1 - a, b)           1 - a
godel          min(a, b)       max(a, b)       1 if a <= b else b      1 if a = 0 else 0
lukasiewicz    max(0, a+b-1)   min(1, a+b)     min(1, 1 - a + b)       1 - a
product        a * b           a + b - a*b     1 if a <= b else b/a    1 if a = 0 else 0
=============  ==============  ==============  ======================  ============

The product implication is the Goguen residuum; its division is exact
on rationals.  Product negation is taken to be the residuated (Godel
style) negation, the standard choice; see PRODUCT_NEGATION_NOTE.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

Degree = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

#: Product logic has no canonical negation of its own in the sources the
#: combination functions come from; we use the residuum at 0, which
#: coincides with the Godel negation.
PRODUCT_NEGATION_NOTE = "product negation = Godel negation (residuum at 0)"


class LogicFamily(Enum):
    """The fuzzy logic family fixing the four combination functions."""

    ZADEH = "zadeh"
    GODEL = "godel"
    LUKASIEWICZ = "lukasiewicz"
    PRODUCT = "product"

    def __str__(self) -> str:
        return self.value


def logic_from_name(name: str) -> LogicFamily:
    try:
        return LogicFamily(name.lower())
    except ValueError:
        known = ", ".join(f.value for f in LogicFamily)
        raise ValueError(f"unknown logic family {name!r} (known: {known})") from None


def as_degree(value: object) -> Degree:
    """Convert ``value`` (Fraction, int, or exact numeric string) to a
    degree, rejecting anything outside [0, 1].

    Decimal strings are converted exactly: as_degree("0.8") == Fraction(4, 5).
    """
    d = Fraction(str(value)) if isinstance(value, str) else Fraction(value)
    if not ZERO <= d <= ONE:
        raise ValueError(f"degree {d} outside [0, 1]")
    return d


def tnorm(logic: LogicFamily, a: Degree, b: Degree) -> Degree:
    if logic is LogicFamily.ZADEH or logic is LogicFamily.GODEL:
        return min(a, b)
    if logic is LogicFamily.LUKASIEWICZ:
        return max(ZERO, a + b - ONE)
    return a * b


def snorm(logic: LogicFamily, a: Degree, b: Degree) -> Degree:
    if logic is LogicFamily.ZADEH or logic is LogicFamily.GODEL:
        return max(a, b)
    if logic is LogicFamily.LUKASIEWICZ:
        return min(ONE, a + b)
    return a + b - a * b


def implication(logic: LogicFamily, a: Degree, b: Degree) -> Degree:
    if logic is LogicFamily.ZADEH:
        return max(ONE - a, b)
    if logic is LogicFamily.GODEL:
        return ONE if a <= b else b
    if logic is LogicFamily.LUKASIEWICZ:
        return min(ONE, ONE - a + b)
    # Goguen: exact rational division
    return ONE if a <= b else b / a


def negation(logic: LogicFamily, a: Degree) -> Degree:
    if logic is LogicFamily.ZADEH or logic is LogicFamily.LUKASIEWICZ:
        return ONE - a
    return ONE if a == ZERO else ZERO
