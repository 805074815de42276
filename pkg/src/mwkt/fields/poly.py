"""Dense univariate polynomials over an arbitrary exact field.

A polynomial is an immutable tuple of coefficients in ascending degree order
with no trailing zeros, together with the coefficient field.  The zero
polynomial has an empty coefficient tuple and degree -1.  No variable name is
stored; printing takes one as a parameter so the same machinery serves both
`F[t]` and `F(t)[x]`.

Division and gcd are the schoolbook field versions (gcds are returned monic).
`Poly.__call__` is generic Horner evaluation: the point may live in any ring
that supports + and * with the coefficients after `lift` is applied, which is
how substitution of rational functions and evaluation at extension-field
roots are both expressed.
"""

from __future__ import annotations

from ..errors import MwktError


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [field(n) for n in ints])

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def gen(cls, field):
        """The polynomial x."""
        return cls(field, [field.zero(), field.one()])

    # --- structure --------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self):
        if self.is_zero():
            raise MwktError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant_term(self):
        return self.coeffs[0] if self.coeffs else self.field.zero()

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero()

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1].is_one()

    def monic(self) -> "Poly":
        if self.is_zero() or self.is_monic():
            return self
        inv = self.leading().inverse()
        return Poly(self.field, [c * inv for c in self.coeffs])

    # --- arithmetic -------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.field, out)

    def __neg__(self) -> "Poly":
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly(self.field, [])
        zero = self.field.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    def scale(self, c) -> "Poly":
        return Poly(self.field, [c * a for a in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        zero = self.field.zero()
        return Poly(self.field, [zero] * k + list(self.coeffs))

    def __pow__(self, n: int) -> "Poly":
        result = Poly.constant(self.field, self.field.one())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        field = self.field
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(field, []), self
        inv_lead = other.leading().inverse()
        quo = [field.zero()] * (dq + 1)
        for i in range(dq, -1, -1):
            c = rem[i + other.degree] * inv_lead
            quo[i] = c
            if not c.is_zero():
                for j, b in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * b
        return Poly(field, quo), Poly(field, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def xgcd(self, other: "Poly"):
        """Return (g, s, t) with g = s*self + t*other, g monic (or zero)."""
        field = self.field
        one = Poly.constant(field, field.one())
        zero = Poly(field, [])
        r0, r1 = self, other
        s0, s1 = one, zero
        t0, t1 = zero, one
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = r0.leading().inverse()
        c = Poly.constant(field, inv)
        return r0.monic(), c * s0, c * t0

    def derivative(self) -> "Poly":
        field = self.field
        return Poly(field, [field(i) * c for i, c in enumerate(self.coeffs) if i >= 1])

    def __call__(self, x, lift=None):
        """Horner evaluation at `x`.

        `lift` maps coefficients into the ring `x` lives in; the result lives
        there too.  With the default identity lift, `x` must accept products
        and sums with raw coefficients.
        """
        if lift is None:
            lift = lambda c: c
        if self.is_zero():
            return lift(self.field.zero())
        acc = lift(self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + lift(c)
        return acc

    # --- identity ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def sort_key(self):
        return (self.degree, tuple(self.field.sort_key(c) for c in reversed(self.coeffs)))

    # --- printing ---------------------------------------------------------

    def format(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            cs = self.field.format_element(c)
            if i == 0:
                term = cs
            else:
                xs = var if i == 1 else f"{var}^{i}"
                if cs == "1":
                    term = xs
                elif cs == "-1":
                    term = f"-{xs}"
                elif any(op in cs[1:] for op in "+-") or "/" in cs or " " in cs:
                    term = f"({cs})*{xs}"
                else:
                    term = f"{cs}*{xs}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    def __repr__(self):
        return f"Poly({self.format()})"


def lagrange_interpolate(field, points):
    """The unique polynomial of degree < len(points) through the given
    (x, y) pairs with distinct x."""
    result = Poly(field, [])
    for i, (xi, yi) in enumerate(points):
        num = Poly.constant(field, yi)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            num = num * Poly(field, [-xj, field.one()])
            num = num.scale((xi - xj).inverse())
        result = result + num
    return result
