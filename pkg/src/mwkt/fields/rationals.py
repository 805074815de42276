"""The rational numbers, wrapping `fractions.Fraction`.

There is a single field object, `QQ`.  Elements are immutable wrappers so
they fit the common element protocol (field reference, `is_zero`, operator
overloads over exact arithmetic).
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import MwktError
from .base import Field, FieldElement


class QElem(FieldElement):
    __slots__ = ("field", "value")

    def __init__(self, field, value: Fraction):
        self.field = field
        self.value = value

    def __add__(self, other):
        assert self.field is other.field
        return QElem(self.field, self.value + other.value)

    def __neg__(self):
        return QElem(self.field, -self.value)

    def __mul__(self, other):
        assert self.field is other.field
        return QElem(self.field, self.value * other.value)

    def inverse(self):
        if not self.value:
            raise ZeroDivisionError("inverse of zero")
        return QElem(self.field, 1 / self.value)

    def is_zero(self):
        return self.value == 0

    def __eq__(self, other):
        return isinstance(other, QElem) and self.value == other.value

    def __hash__(self):
        return hash(("Q", self.value))

    def __repr__(self):
        return str(self.value)


def _is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


class RationalField(Field):
    char = 0

    def __call__(self, n):
        if isinstance(n, QElem):
            return n
        if isinstance(n, (int, Fraction)):
            return QElem(self, Fraction(n))
        raise MwktError(f"cannot coerce {n!r} into Q")

    def is_square(self, a: QElem) -> bool:
        v = a.value
        if v == 0:
            return True
        return v > 0 and _is_perfect_square(v.numerator) and _is_perfect_square(v.denominator)

    def sqrt(self, a: QElem):
        if not self.is_square(a):
            return None
        v = a.value
        return QElem(self, Fraction(math.isqrt(v.numerator), math.isqrt(v.denominator)))

    def sort_key(self, a: QElem):
        return (a.value.numerator, a.value.denominator)

    def random_element(self, rng) -> QElem:
        # Small heights keep downstream factorizations honest and fast.
        num = rng.randint(-12, 12)
        den = rng.randint(1, 8)
        return QElem(self, Fraction(num, den))

    def format_element(self, a: QElem) -> str:
        return str(a.value)

    def __repr__(self):
        return "Q"

    def __str__(self):
        return "Q"


QQ = RationalField()
