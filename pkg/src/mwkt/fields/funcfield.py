"""Rational function fields F(t) over an exact base field.

Elements are reduced fractions num/den of dense polynomials over the base:
den is monic, gcd(num, den) = 1, and zero is 0/1.  The variable name is a
property of the field object; nested function fields pick distinct names
(`s`, then `t`, ...) only through explicit construction.

Squareness and square roots factor the numerator and denominator (lazily
importing the factorization dispatcher to avoid an import cycle) and then
reduce to squareness of the leading coefficient in the base.
"""

from __future__ import annotations

from ..errors import MwktError
from .base import Field, FieldElement
from .poly import Poly

_CACHE: dict = {}


def rational_function_field(base: Field, var: str = "t") -> "RationalFunctionField":
    key = (id(base), var)
    if key not in _CACHE:
        _CACHE[key] = RationalFunctionField(base, var)
    return _CACHE[key]


class RFElem(FieldElement):
    __slots__ = ("field", "num", "den")

    def __init__(self, field, num: Poly, den: Poly, normalized=False):
        if not normalized:
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if num.is_zero():
                den = Poly.constant(field.base, field.base.one())
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num // g, den // g
                if not den.is_monic():
                    inv = den.leading().inverse()
                    num, den = num.scale(inv), den.monic()
        self.field = field
        self.num = num
        self.den = den

    def __add__(self, other):
        assert self.field is other.field
        return RFElem(self.field, self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RFElem(self.field, -self.num, self.den, normalized=True)

    def __mul__(self, other):
        assert self.field is other.field
        return RFElem(self.field, self.num * other.num, self.den * other.den)

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RFElem(self.field, self.den, self.num)

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        return (
            isinstance(other, RFElem)
            and self.field is other.field
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((id(self.field), self.num.coeffs, self.den.coeffs))

    def __repr__(self):
        return self.field.format_element(self)


class RationalFunctionField(Field):
    def __init__(self, base: Field, var: str = "t"):
        self.base = base
        self.var = var
        self.char = base.char
        self._one_poly = Poly.constant(base, base.one())

    # --- construction helpers ----------------------------------------------

    def __call__(self, n):
        if isinstance(n, RFElem) and n.field is self:
            return n
        if isinstance(n, int):
            return self.constant(self.base(n))
        if isinstance(n, Poly) and n.field is self.base:
            return self.from_poly(n)
        return self.constant(self.base(n))

    def constant(self, c) -> RFElem:
        return RFElem(self, Poly.constant(self.base, c), self._one_poly, normalized=True)

    def from_poly(self, p: Poly) -> RFElem:
        return RFElem(self, p, self._one_poly, normalized=True)

    def from_fraction(self, num: Poly, den: Poly) -> RFElem:
        return RFElem(self, num, den)

    def gen(self) -> RFElem:
        return self.from_poly(Poly.gen(self.base))

    # --- predicates ---------------------------------------------------------

    def is_square(self, a: RFElem) -> bool:
        return self.sqrt(a) is not None

    def sqrt(self, a: RFElem):
        from .factor import factor_poly

        if a.is_zero():
            return self.zero()
        lead = a.num.leading()
        root_lead = self.base.sqrt(lead)
        if root_lead is None:
            return None
        num_root = Poly.constant(self.base, root_lead)
        for q, e in factor_poly(a.num.monic()):
            if e % 2:
                return None
            num_root = num_root * q ** (e // 2)
        den_root = self._one_poly
        for q, e in factor_poly(a.den):
            if e % 2:
                return None
            den_root = den_root * q ** (e // 2)
        return RFElem(self, num_root, den_root)

    def pth_root(self, a: RFElem):
        """In characteristic p: the unique p-th root, or None."""
        num = poly_pth_root(a.num)
        den = poly_pth_root(a.den)
        if num is None or den is None:
            return None
        return RFElem(self, num, den)

    # --- determinism hooks ---------------------------------------------------

    def sort_key(self, a: RFElem):
        return (a.num.sort_key(), a.den.sort_key())

    def random_element(self, rng) -> RFElem:
        num = Poly(self.base, [self.base.random_element(rng) for _ in range(rng.randint(1, 3))])
        if rng.random() < 0.3:
            den = Poly(self.base, [self.base.random_element(rng), self.base.one()])
        else:
            den = self._one_poly
        if den.is_zero():
            den = self._one_poly
        return RFElem(self, num, den)

    def format_element(self, a: RFElem) -> str:
        ns = a.num.format(self.var)
        if a.den.degree == 0:
            return ns
        ds = a.den.format(self.var)
        if a.num.degree > 0 and len(a.num.coeffs) - sum(c.is_zero() for c in a.num.coeffs) > 1:
            ns = f"({ns})"
        return f"{ns}/({ds})"

    def __repr__(self):
        return f"{self.base!r}({self.var})"

    def __str__(self):
        return f"{self.base}({self.var})"


def poly_pth_root(f: Poly):
    """The p-th root of a polynomial over a field of characteristic p > 0,
    or None if there is none.  Requires every exponent with a nonzero
    coefficient to be divisible by p and every coefficient to admit a p-th
    root in the base (automatic over perfect bases)."""
    field = f.field
    p = field.char
    assert p > 0
    if f.is_zero():
        return f
    dense = [field.zero()] * (f.degree // p + 1)
    for i, c in enumerate(f.coeffs):
        if c.is_zero():
            continue
        if i % p:
            return None
        r = field.pth_root(c)
        if r is None:
            return None
        dense[i // p] = r
    return Poly(field, dense)
