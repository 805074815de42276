"""Integer and Gaussian-integer number theory used by the quadratic-form
and symbol backends over Q and Q(i).

Everything here is elementary and exact: Legendre and Hilbert symbols,
2-adic decompositions, and factorization of Gaussian integers into a
canonical set of primes.  Rational integer factorization is delegated to
sympy's `factorint`.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from ..errors import MwktError


def factorint(n: int) -> dict:
    """Prime factorization of a nonzero integer; -1 appears with exponent 1
    for negatives, mirroring sympy's convention."""
    if n == 0:
        raise MwktError("cannot factor zero")
    return {int(p): int(e) for p, e in sympy.factorint(n).items()}


def legendre(a: int, p: int) -> int:
    """(a|p) in {-1, 0, 1} for odd prime p."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def sqrt_mod(a: int, p: int):
    """A square root of a mod an odd prime p, or None (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = next(z for z in range(2, p) if legendre(z, p) == -1)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def two_adic(n: int):
    """n = 2^a * u with u odd; returns (a, u).  n must be nonzero."""
    assert n != 0
    a = 0
    while n % 2 == 0:
        n //= 2
        a += 1
    return a, n


def hilbert_symbol_2(a: Fraction, b: Fraction) -> int:
    """The Hilbert symbol (a, b)_2 over the 2-adic numbers, for nonzero
    rationals, by the classical closed formula: with a = 2^alpha u,
    b = 2^beta v (u, v odd), the symbol is
    (-1)^( eps(u) eps(v) + alpha omega(v) + beta omega(u) ),
    eps(u) = (u-1)/2 mod 2, omega(u) = (u^2-1)/8 mod 2.
    """
    assert a != 0 and b != 0
    alpha, u = two_adic(a.numerator * a.denominator)
    beta, v = two_adic(b.numerator * b.denominator)
    eps_u = (u - 1) // 2 % 2
    eps_v = (v - 1) // 2 % 2
    om_u = (u * u - 1) // 8 % 2
    om_v = (v * v - 1) // 8 % 2
    return -1 if (eps_u * eps_v + alpha * om_v + beta * om_u) % 2 else 1


def hilbert_symbol_odd(a: Fraction, b: Fraction, p: int) -> int:
    """The Hilbert symbol (a, b)_p at an odd prime, via the tame formula
    (a, b)_p = ( (-1)^(alpha beta) u^beta v^(-alpha) | p )  for
    a = p^alpha u, b = p^beta v with u, v p-units."""
    assert a != 0 and b != 0
    alpha, u = _padic(a, p)
    beta, v = _padic(b, p)
    t = pow(-1, alpha * beta) * pow(u, beta, p) * pow(_inv_mod(v, p), alpha, p)
    if alpha == 0 and beta == 0:
        return 1
    return legendre(t, p)


def _padic(a: Fraction, p: int):
    """a = p^v * u; returns (v, u mod-free integer representative) with u a
    p-unit given as an integer prime to p (num * den^{-1} resolved mod p is
    NOT enough here; we keep u as a genuine integer num/den pair product)."""
    num, den = a.numerator, a.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    # u = num/den as an integer mod any power of p; for symbol purposes an
    # integer representative prime to p suffices.
    u = num * _inv_mod(den, p * p) % (p * p)
    if u % p == 0:  # cannot happen, but keep the invariant loud
        raise MwktError("p-adic unit reduction failed")
    return v, u


def _inv_mod(a: int, m: int) -> int:
    return pow(a, -1, m)


# --- Gaussian integers ----------------------------------------------------
#
# A Gaussian integer is a pair (x, y) meaning x + y*i.  The canonical
# associate of a nonzero Gaussian integer multiplies by a unit in
# {1, i, -1, -i} so that x > 0 and y >= 0, except fixing the split-prime
# ambiguity is not needed: canonical primes are those with x > 0, y >= 0,
# and for primes above p = a^2 + b^2 with a odd we pick (odd, even) ordering
# so that exactly one of the two conjugate primes has that shape with a odd
# positive and b even nonnegative... the simple rule below (x > 0, y >= 0,
# and x odd for norm != 2) picks one representative per associate class and
# distinguishes the two conjugates above a split p.

GaussInt = tuple


def g_mul(a: GaussInt, b: GaussInt) -> GaussInt:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def g_conj(a: GaussInt) -> GaussInt:
    return (a[0], -a[1])


def g_norm(a: GaussInt) -> int:
    return a[0] * a[0] + a[1] * a[1]


def g_divmod(a: GaussInt, b: GaussInt):
    """Nearest-integer division: a = q*b + r with N(r) <= N(b)/2."""
    nb = g_norm(b)
    if nb == 0:
        raise ZeroDivisionError
    num = g_mul(a, g_conj(b))
    # round each coordinate to the nearest integer (half rounds up)
    q = ((2 * num[0] + nb) // (2 * nb), (2 * num[1] + nb) // (2 * nb))
    r = (a[0] - (q[0] * b[0] - q[1] * b[1]), a[1] - (q[0] * b[1] + q[1] * b[0]))
    return q, r


def g_gcd(a: GaussInt, b: GaussInt) -> GaussInt:
    while b != (0, 0):
        _, r = g_divmod(a, b)
        a, b = b, r
    return a


def g_canonical_associate(a: GaussInt) -> tuple:
    """Returns (canonical, unit) with canonical = unit * a, canonical in the
    first-quadrant normal form x > 0, y >= 0."""
    if a == (0, 0):
        return a, (1, 0)
    units = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    for u in units:
        c = g_mul(u, a)
        if c[0] > 0 and c[1] >= 0:
            return c, u
    raise MwktError("unreachable")


def gaussian_prime_above(p: int) -> GaussInt:
    """For p = 2 or p = 1 mod 4: a canonical Gaussian prime dividing p."""
    if p == 2:
        return (1, 1)
    assert p % 4 == 1
    s = sqrt_mod(p - 1, p)  # square root of -1
    assert s is not None
    pi = g_gcd((p, 0), (s, 1))
    c, _ = g_canonical_associate(pi)
    # Conjugate classes (x, y) and (y, x) are both first-quadrant; take the
    # one with odd real part (exactly one of x, y is odd since p is odd).
    if c[0] % 2 == 0:
        c = (c[1], c[0])
    return c


def g_factor(a: GaussInt) -> tuple:
    """Factor a nonzero Gaussian integer: returns (unit, {prime: exponent})
    with canonical primes as produced by this module."""
    if a == (0, 0):
        raise MwktError("cannot factor zero")
    factors: dict = {}
    n = g_norm(a)
    for p, _ in factorint(n).items():
        if p == -1:
            continue
        if p % 4 == 3:
            pi = (p, 0)
            while True:
                q, r = g_divmod(a, pi)
                if r != (0, 0):
                    break
                a = q
                factors[pi] = factors.get(pi, 0) + 1
        else:
            pi = gaussian_prime_above(p) if p != 2 else (1, 1)
            for cand in (pi, g_canonical_associate(g_conj(pi))[0]):
                while True:
                    q, r = g_divmod(a, cand)
                    if r != (0, 0):
                        break
                    a = q
                    factors[cand] = factors.get(cand, 0) + 1
                if p == 2:
                    break  # (1,1) and its conjugate are associates
    # what is left is a unit
    assert g_norm(a) == 1, "nonunit cofactor after factoring"
    return a, factors
