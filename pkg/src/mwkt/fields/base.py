"""Common protocol for exact field objects.

Every field in this package is a plain Python object exposing the same small
surface: element construction from integers, `zero`/`one`, predicates
(`is_square`), optional square roots, deterministic element ordering for
reproducible output, and a seeded sampler.  Elements are immutable, hashable,
and overload the arithmetic operators; they carry a reference to their field,
and mixing elements of different fields is a bug (guarded by asserts in the
concrete classes, not silently coerced).

Characteristic is stored on the field as `char` (0 for characteristic zero).
"""

from __future__ import annotations

from ..errors import Unsupported


class Field:
    """Abstract base.  Concrete fields fill in the attributes below."""

    char: int = 0

    def __call__(self, n):
        """Coerce an integer (or an element of this field) to an element."""
        raise NotImplementedError

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    # --- predicates -------------------------------------------------------

    def is_square(self, a) -> bool:
        raise Unsupported(f"no square test for {self!r}")

    def sqrt(self, a):
        """A square root of `a`, or None if `a` is not a square."""
        raise Unsupported(f"no square root for {self!r}")

    def pth_root(self, a):
        """In characteristic p, the (unique) p-th root of `a`, or None.

        Characteristic-zero fields never implement this.
        """
        raise Unsupported(f"no p-th root for {self!r}")

    # --- determinism hooks ------------------------------------------------

    def sort_key(self, a):
        """Total order on elements, used only to make output deterministic."""
        raise NotImplementedError

    def random_element(self, rng):
        raise NotImplementedError

    def random_unit(self, rng):
        a = self.random_element(rng)
        while a.is_zero():
            a = self.random_element(rng)
        return a

    def format_element(self, a) -> str:
        return str(a)


class FieldElement:
    """Mixin supplying the derived operators.

    Concrete classes implement __add__, __neg__, __mul__, inverse(),
    is_zero(), __eq__ and __hash__.
    """

    field: Field

    __slots__ = ()

    def __sub__(self, other):
        return self + (-other)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        raise NotImplementedError

    def is_zero(self) -> bool:
        raise NotImplementedError

    def is_one(self) -> bool:
        return self == self.field.one()
