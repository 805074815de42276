"""Finite fields GF(p^k) of odd characteristic with a coherent tower.

Representation.  An element of GF(p^k) is a tuple of k integers in [0, p),
the coordinates in the power basis 1, g, ..., g^{k-1} of a distinguished
generator g.  For k = 1 the generator is the smallest primitive root mod p;
for k >= 2 it is the class of x modulo a distinguished degree-k polynomial
f_{p,k} over GF(p), chosen as the lexicographically smallest monic polynomial
(coefficients compared from the x^{k-1} coefficient down to the constant,
each in 0..p-1) such that

  * x has multiplicative order p^k - 1 in GF(p)[x]/(f)  (this single
    condition certifies irreducibility as well), and
  * for every proper divisor d of k, the distinguished degree-d polynomial
    vanishes at g^((p^k-1)/(p^d-1)).

The second condition makes the maps g_d |-> g_k^((p^k-1)/(p^d-1)) a
commuting system of embeddings GF(p^d) -> GF(p^k), which `embed` uses.

Multiplication runs through a discrete-log table (the fields here are tiny;
the construction refuses q > 1_000_000 rather than degrade).  Squares and
square roots are read off the parity of the discrete log.

Characteristic 2 is rejected: the symbol calculus built on top of this
package needs 2 to be invertible-adjacent (h = <1> + <-1> must differ
from 0 in rank only), and none of the supported computations make sense
there.
"""

from __future__ import annotations

from ..errors import MwktError, Unsupported
from .base import Field, FieldElement

_CACHE: dict[tuple[int, int], "FiniteField"] = {}
_MAX_Q = 1_000_000


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def finite_field(p: int, k: int = 1) -> "FiniteField":
    """The field GF(p^k), cached so repeated calls return the same object."""
    key = (p, k)
    if key not in _CACHE:
        if p == 2:
            raise Unsupported("characteristic 2 is not supported")
        if not _is_prime(p):
            raise MwktError(f"{p} is not prime")
        if k < 1:
            raise MwktError("extension degree must be positive")
        if p**k > _MAX_Q:
            raise Unsupported(f"GF({p}^{k}) is too large for table-based arithmetic")
        _CACHE[key] = FiniteField(p, k)
    return _CACHE[key]


class FFElem(FieldElement):
    __slots__ = ("field", "coeffs")

    def __init__(self, field: "FiniteField", coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def __add__(self, other: "FFElem") -> "FFElem":
        assert self.field is other.field, "elements of different fields"
        p = self.field.p
        return FFElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FFElem":
        p = self.field.p
        return FFElem(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other: "FFElem") -> "FFElem":
        assert self.field is other.field, "elements of different fields"
        f = self.field
        if self.is_zero() or other.is_zero():
            return f.zero()
        e = (f.dlog[self.coeffs] + f.dlog[other.coeffs]) % (f.q - 1)
        return FFElem(f, f.pow_table[e])

    def inverse(self) -> "FFElem":
        f = self.field
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        e = (-f.dlog[self.coeffs]) % (f.q - 1)
        return FFElem(f, f.pow_table[e])

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, FFElem) and self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.coeffs))

    def lift_int(self) -> int:
        """For prime fields only: the representative in [0, p)."""
        assert self.field.k == 1
        return self.coeffs[0]

    def __repr__(self):
        return self.field.format_element(self)


class FiniteField(Field):
    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.q = p**k
        self.char = p
        self._elems = None
        if k == 1:
            self.modulus_coeffs = None
            g = self._smallest_primitive_root()
            self._build_tables_prime(g)
        else:
            # Distinguished polynomials of the proper subfields, needed for
            # the compatibility condition; building them populates the cache.
            self._subfield_moduli = {
                d: finite_field(p, d) for d in range(1, k) if k % d == 0
            }
            self.modulus_coeffs = self._find_modulus()
            self._build_tables_ext()

    # --- construction -----------------------------------------------------

    def _smallest_primitive_root(self) -> int:
        p = self.p
        rs = _prime_factors(p - 1)
        for g in range(2, p):
            if all(pow(g, (p - 1) // r, p) != 1 for r in rs):
                return g
        raise MwktError("no primitive root found")  # unreachable for prime p

    def _build_tables_prime(self, g: int):
        p = self.p
        self.pow_table = []
        self.dlog = {}
        acc = 1
        for e in range(p - 1):
            self.pow_table.append((acc,))
            self.dlog[(acc,)] = e
            acc = acc * g % p

    @staticmethod
    def _polymulmod(a, b, mod, p):
        """Multiply coefficient tuples mod the monic tuple `mod`, all over GF(p)."""
        k = len(mod) - 1
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % p
        for i in range(len(out) - 1, k - 1, -1):
            c = out[i]
            if c:
                out[i] = 0
                for j in range(k):
                    out[i - k + j] = (out[i - k + j] - c * mod[j]) % p
        out = out[:k]
        out += [0] * (k - len(out))
        return tuple(out)

    @classmethod
    def _polypowmod(cls, a, n, mod, p):
        k = len(mod) - 1
        result = tuple([1] + [0] * (k - 1))
        base = a
        while n:
            if n & 1:
                result = cls._polymulmod(result, base, mod, p)
            base = cls._polymulmod(base, base, mod, p)
            n >>= 1
        return result

    def _find_modulus(self) -> tuple:
        """Search monic degree-k candidates in lex order (high coefficients
        first) for the distinguished polynomial described in the module
        docstring.  Returns the full coefficient tuple (a_0, ..., a_{k-1}, 1).
        """
        p, k, q = self.p, self.k, self.q
        rs = _prime_factors(q - 1)
        x = tuple([0, 1] + [0] * (k - 2))
        one = tuple([1] + [0] * (k - 1))

        def candidates():
            # lex order on (a_{k-1}, ..., a_1, a_0)
            for n in range(p**k):
                m = n
                digits = []
                for _ in range(k):
                    digits.append(m % p)
                    m //= p
                # digits[0] = a_0 varies fastest: that is lex order on
                # (a_{k-1}, ..., a_0) read most-significant-first.
                yield tuple(digits) + (1,)

        for mod in candidates():
            if mod[0] == 0:
                continue  # x divides it, x not a unit
            # order of x must be exactly q - 1
            if self._polypowmod(x, q - 1, mod, p) != one:
                continue
            if any(self._polypowmod(x, (q - 1) // r, mod, p) == one for r in rs):
                continue
            # subfield compatibility
            ok = True
            for d, sub in self._subfield_moduli.items():
                h = self._polypowmod(x, (q - 1) // (p**d - 1), mod, p)
                if d == 1:
                    g1 = sub.pow_table[1][0]
                    if h != tuple([g1] + [0] * (k - 1)):
                        ok = False
                        break
                else:
                    # evaluate the subfield's modulus at h inside GF(p^k)
                    sub_mod = sub.modulus_coeffs
                    acc = tuple([sub_mod[-1] % p] + [0] * (k - 1))
                    for c in reversed(sub_mod[:-1]):
                        acc = self._polymulmod(acc, h, mod, p)
                        acc = tuple((a + (c if i == 0 else 0)) % p for i, a in enumerate(acc))
                    if any(acc):
                        ok = False
                        break
            if ok:
                return mod
        raise MwktError(f"no distinguished modulus found for GF({p}^{k})")

    def _build_tables_ext(self):
        p, k, q = self.p, self.k, self.q
        mod = self.modulus_coeffs
        x = tuple([0, 1] + [0] * (k - 2))
        self.pow_table = []
        self.dlog = {}
        acc = tuple([1] + [0] * (k - 1))
        for e in range(q - 1):
            self.pow_table.append(acc)
            self.dlog[acc] = e
            acc = self._polymulmod(acc, x, mod, p)
        assert acc == self.pow_table[0], "generator order is not q - 1"

    # --- field protocol ----------------------------------------------------

    def __call__(self, n) -> FFElem:
        if isinstance(n, FFElem) and n.field is self:
            return n
        if isinstance(n, int):
            return FFElem(self, (n % self.p,) + (0,) * (self.k - 1))
        raise MwktError(f"cannot coerce {n!r} into {self!r}")

    def zero(self) -> FFElem:
        return FFElem(self, (0,) * self.k)

    def one(self) -> FFElem:
        return FFElem(self, (1,) + (0,) * (self.k - 1))

    def gen(self) -> FFElem:
        """The distinguished multiplicative generator."""
        return FFElem(self, self.pow_table[1])

    def from_dlog(self, e: int) -> FFElem:
        return FFElem(self, self.pow_table[e % (self.q - 1)])

    def elements(self):
        """All q elements, zero first then ascending powers of the generator."""
        if self._elems is None:
            self._elems = [self.zero()] + [FFElem(self, t) for t in self.pow_table]
        return list(self._elems)

    def is_square(self, a: FFElem) -> bool:
        if a.is_zero():
            return True
        return self.dlog[a.coeffs] % 2 == 0

    def sqrt(self, a: FFElem):
        if a.is_zero():
            return self.zero()
        e = self.dlog[a.coeffs]
        if e % 2:
            return None
        return FFElem(self, self.pow_table[e // 2])

    def pth_root(self, a: FFElem) -> FFElem:
        """Frobenius is invertible: the unique p-th root is a^(p^(k-1))."""
        return a ** (self.p ** (self.k - 1))

    def frobenius(self, a: FFElem) -> FFElem:
        return a**self.p

    def embed(self, a: FFElem) -> FFElem:
        """Embed an element of a subfield GF(p^d), d | k, into this field."""
        src = a.field
        if src is self:
            return a
        if src.p != self.p or self.k % src.k != 0:
            raise MwktError(f"no embedding GF({src.p}^{src.k}) -> GF({self.p}^{self.k})")
        if a.is_zero():
            return self.zero()
        scale = (self.q - 1) // (src.q - 1)
        return self.from_dlog(src.dlog[a.coeffs] * scale)

    def sort_key(self, a: FFElem):
        if a.is_zero():
            return (0, 0)
        return (1, self.dlog[a.coeffs])

    def random_element(self, rng) -> FFElem:
        n = rng.randrange(self.q)
        digits = []
        for _ in range(self.k):
            digits.append(n % self.p)
            n //= self.p
        return FFElem(self, tuple(digits))

    def format_element(self, a: FFElem) -> str:
        if self.k == 1:
            return str(a.coeffs[0])
        parts = []
        for i in range(self.k - 1, -1, -1):
            c = a.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                gs = "g" if i == 1 else f"g^{i}"
                parts.append(gs if c == 1 else f"{c}*{gs}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"

    def __str__(self):
        return f"GF({self.q})"
