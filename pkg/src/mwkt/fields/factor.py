"""Factorization of univariate polynomials, dispatched on the coefficient
field.

 * finite fields: squarefree decomposition, distinct-degree splitting, then
   Cantor-Zassenhaus equal-degree splitting with a deterministic seed;
 * Q: delegated to sympy;
 * number fields (quotients of Q[x]): Trager's norm method, with resultants
   computed by a Euclidean remainder sequence over Q(x);
 * rational function fields F(t): only the shapes the rest of the package
   needs: degree <= 1, constant coefficients (factor over F and lift),
   x^p - c in characteristic p, quadratics (via square roots in F(t)), and
   cubics over a small finite constant field (rational root search).  Other
   shapes raise Unsupported.

`factor_poly(f)` returns a list of (monic irreducible, multiplicity) pairs,
deterministically ordered, whose product times the leading coefficient is f.
"""

from __future__ import annotations

import random
from fractions import Fraction

import sympy

from ..errors import MwktError, Unsupported
from .extension import ExtField
from .finite import FiniteField
from .funcfield import RationalFunctionField, poly_pth_root
from .poly import Poly
from .rationals import QQ, QElem


def factor_poly(f: Poly):
    """Monic irreducible factors with multiplicity, sorted."""
    if f.is_zero():
        raise MwktError("cannot factor the zero polynomial")
    if f.degree == 0:
        return []
    f = f.monic()
    field = f.field
    if isinstance(field, FiniteField):
        out = _factor_finite(f)
    elif field is QQ:
        out = _factor_rationals(f)
    elif isinstance(field, ExtField):
        if field.base is QQ:
            out = _factor_trager(f)
        else:
            raise Unsupported(f"factorization over {field!r} is not supported")
    elif isinstance(field, RationalFunctionField):
        out = _factor_funcfield(f)
    else:
        raise Unsupported(f"factorization over {field!r} is not supported")
    out.sort(key=lambda ge: (ge[0].degree, ge[0].sort_key()))
    prod = Poly.constant(field, field.one())
    for g, e in out:
        prod = prod * g**e
    assert prod == f, "factorization does not multiply back"
    return out


def is_irreducible(f: Poly) -> bool:
    fs = factor_poly(f)
    return len(fs) == 1 and fs[0][1] == 1


# --- squarefree decomposition (any characteristic) --------------------------


def squarefree_decomposition(f: Poly):
    """[(g_i, m_i)] with f monic = prod g_i^(m_i), the g_i squarefree and
    pairwise coprime.  In characteristic p an inseparable part that is not a
    p-th power (imperfect coefficient fields) is returned as is with
    multiplicity 1."""
    field = f.field
    p = field.char
    if f.degree == 0:
        return []
    fp = f.derivative()
    if fp.is_zero():
        r = poly_pth_root(f)
        if r is None:
            return [(f, 1)]  # imperfect-base atom, e.g. x^p - t
        return [(g, p * m) for g, m in squarefree_decomposition(r.monic())]
    out = []
    c = f.gcd(fp)
    w = f // c
    i = 1
    while w.degree > 0:
        y = w.gcd(c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        w = y
        c = c // y
        i += 1
    if c.degree > 0:
        assert p > 0
        r = poly_pth_root(c)
        if r is None:
            out.append((c, 1))
        else:
            out.extend((g, p * m) for g, m in squarefree_decomposition(r.monic()))
    return out


# --- finite fields -----------------------------------------------------------


def _factor_finite(f: Poly):
    out = []
    for g, m in squarefree_decomposition(f):
        for h in _factor_finite_squarefree(g):
            out.append((h, m))
    return out


def _factor_finite_squarefree(f: Poly):
    """Distinct-degree then equal-degree splitting; f squarefree monic."""
    field: FiniteField = f.field
    q = field.q
    factors = []
    x = Poly.gen(field)
    h = x
    d = 0
    while f.degree > 0:
        d += 1
        if 2 * d > f.degree:
            factors.append(f)
            break
        h = _polypow_mod(h, q, f)
        g = (h - x).gcd(f)
        if g.degree > 0:
            factors.extend(_equal_degree_split(g, d))
            f = f // g
            h = h % f
    return factors


def _polypow_mod(base: Poly, n: int, modulus: Poly) -> Poly:
    result = Poly.constant(base.field, base.field.one())
    base = base % modulus
    while n:
        if n & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        n >>= 1
    return result


def _equal_degree_split(f: Poly, d: int):
    """Cantor-Zassenhaus for odd q: f is a product of distinct irreducibles
    all of degree d."""
    field: FiniteField = f.field
    if f.degree == d:
        return [f.monic()]
    q = field.q
    rng = random.Random(0xC2 ^ f.degree)
    exponent = (q**d - 1) // 2
    while True:
        r = Poly(field, [field.random_element(rng) for _ in range(f.degree)])
        if r.degree < 1:
            continue
        g = r.gcd(f)
        if 0 < g.degree < f.degree:
            pass  # lucky split by gcd alone
        else:
            s = _polypow_mod(r, exponent, f)
            g = (s - Poly.constant(field, field.one())).gcd(f)
            if not (0 < g.degree < f.degree):
                continue
        return _equal_degree_split(g, d) + _equal_degree_split((f // g).monic(), d)


# --- rationals ----------------------------------------------------------------


def _factor_rationals(f: Poly):
    xs = sympy.Symbol("x")
    expr = sympy.Poly([sympy.Rational(c.value) for c in reversed(f.coeffs)], xs, domain="QQ")
    _, parts = expr.factor_list()
    out = []
    for part, e in parts:
        coeffs = [QElem(QQ, Fraction(str(c))) for c in reversed(part.all_coeffs())]
        g = Poly(QQ, coeffs).monic()
        out.append((g, int(e)))
    return out


# --- number fields (Trager) ----------------------------------------------------


def _resultant(f: Poly, g: Poly):
    """res(f, g) over any field, by the Euclidean remainder sequence."""
    field = f.field
    if f.is_zero() or g.is_zero():
        return field.zero()
    if g.degree == 0:
        return g.leading() ** f.degree
    if f.degree == 0:
        return f.leading() ** g.degree
    r = f % g
    if r.is_zero():
        return field.zero()
    sign = field.one() if (f.degree * g.degree) % 2 == 0 else -field.one()
    return sign * g.leading() ** (f.degree - r.degree) * _resultant(g, r)


def _factor_trager(f: Poly):
    out = []
    for g, m in squarefree_decomposition(f):
        for h in _trager_squarefree(g):
            out.append((h, m))
    return out


def _trager_squarefree(f: Poly):
    K: ExtField = f.field
    m = K.minpoly  # over Q
    if f.degree == 1:
        return [f]
    Qx = _qx_field()
    for s in range(0, 40):
        s_elem = K(-s)
        shift = Poly(K, [s_elem * K.gen(), K.one()])  # x - s*theta
        g_s = f(shift, lift=lambda c: Poly.constant(K, c))
        norm = _norm_poly(g_s, m, Qx)
        if norm.gcd(norm.derivative()).degree == 0:
            rational_factors = _factor_rationals(norm)
            out = []
            for h, _ in rational_factors:
                h_K = Poly(K, [K.scalar(c) for c in h.coeffs])
                piece = g_s.gcd(h_K)
                if piece.degree > 0:
                    unshift = Poly(K, [K(s) * K.gen(), K.one()])  # x + s*theta
                    out.append(piece(unshift, lift=lambda c: Poly.constant(K, c)).monic())
            assert sum(p.degree for p in out) == f.degree
            return out
    raise MwktError("no squarefree norm found (ran out of shifts)")


_QX = None


def _qx_field():
    global _QX
    if _QX is None:
        from .funcfield import rational_function_field

        _QX = rational_function_field(QQ, "X")
    return _QX


def _norm_poly(g: Poly, minpoly_q: Poly, Qx) -> Poly:
    """Res_y(m(y), G(x, y)) in Q[x], where G replaces theta by y in g."""
    K: ExtField = g.field
    d = K.degree
    # coefficient of y^j is a polynomial in x
    cols = [[] for _ in range(d)]
    for c in g.coeffs:  # c in K
        for j in range(d):
            cols[j].append(c.coeffs[j])
    y_coeffs = [Qx.from_poly(Poly(QQ, col)) for col in cols]
    G = Poly(Qx, y_coeffs)
    m_lift = Poly(Qx, [Qx.constant(c) for c in minpoly_q.coeffs])
    res = _resultant(m_lift, G)
    assert res.den.degree == 0
    num = res.num.scale(res.den.constant_term().inverse())
    return Poly(QQ, num.coeffs)


# --- rational function fields ---------------------------------------------------


def _factor_funcfield(f: Poly):
    out = []
    for g, m in squarefree_decomposition(f):
        for h in _funcfield_atom(g):
            out.append((h, m))
    return out


def _funcfield_atom(f: Poly):
    """Factor a squarefree (or imperfect-atom) monic polynomial over F(t)."""
    E: RationalFunctionField = f.field
    F = E.base
    d = f.degree
    if d == 1:
        return [f]

    # constant coefficients: factor over the constant field and lift
    if all(c.is_polynomial() and c.num.degree <= 0 for c in f.coeffs):
        f0 = Poly(F, [c.num.constant_term() for c in f.coeffs])
        lift = lambda g: Poly(E, [E.constant(c) for c in g.coeffs])
        return [lift(g) for g, e in factor_poly(f0) for _ in range(e)]

    p = E.char
    middle_zero = all(f.coeff(i).is_zero() for i in range(1, d))
    if p > 0 and d == p and middle_zero:
        c = -f.constant_term()
        r = E.pth_root(c)
        if r is None:
            return [f]
        # (x - r)^p, but squarefree input should have excluded this
        return [Poly(E, [-r, E.one()])] * p

    if d == 2:
        b, c = f.coeff(1), f.coeff(0)
        disc = b * b - E(4) * c
        root = E.sqrt(disc)
        if root is None:
            return [f]
        two_inv = E(2).inverse()
        r1 = (-b + root) * two_inv
        r2 = (-b - root) * two_inv
        return sorted(
            [Poly(E, [-r1, E.one()]), Poly(E, [-r2, E.one()])],
            key=lambda g: g.sort_key(),
        )

    if d == 3:
        root = _funcfield_cubic_root(f)
        if root is None:
            return [f]
        lin = Poly(E, [-root, E.one()])
        rest = f // lin
        return sorted([lin] + _funcfield_atom(rest), key=lambda g: g.sort_key())

    raise Unsupported(f"cannot factor degree {d} over {E!r}")


def _funcfield_cubic_root(f: Poly):
    """Search for a root in F(t) of a monic cubic, F a small finite field."""
    E: RationalFunctionField = f.field
    F = E.base
    if not isinstance(F, FiniteField) or F.q > 81:
        raise Unsupported("cubic factorization needs a small finite constant field")
    # clear denominators: capital F[t]-coefficients
    den = Poly.constant(F, F.one())
    for c in f.coeffs:
        den = den * (c.den // c.den.gcd(den))
    cleared = [c * E.from_poly(den) for c in f.coeffs]
    assert all(c.is_polynomial() for c in cleared)
    lead = cleared[-1].num
    trail = cleared[0].num
    if trail.is_zero():
        return E.zero()
    lead_divisors = _monic_divisors(lead)
    trail_divisors = _monic_divisors(trail)
    units = [e for e in F.elements() if not e.is_zero()]
    for nd in trail_divisors:
        for dd in lead_divisors:
            for c in units:
                cand = E.from_fraction(nd.scale(c), dd)
                if f(cand).is_zero():
                    return cand
    return None


def _monic_divisors(p: Poly):
    """All monic divisors of a nonzero polynomial over a finite field."""
    factors = factor_poly(p)
    divisors = [Poly.constant(p.field, p.field.one())]
    for g, e in factors:
        new = []
        power = Poly.constant(p.field, p.field.one())
        for k in range(e + 1):
            new.extend(d * power for d in divisors)
            power = power * g
        divisors = new
    return divisors
