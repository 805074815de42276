"""Finite field extensions as presentations with a concrete realization.

An `Extension` packages a base field E, a monic irreducible polynomial f
over E, a realization field F isomorphic to E[x]/(f), a distinguished root
theta of f in F, and the two directions of travel: `embed` (E into F) and
`to_poly` (write an element of F in the power basis 1, theta, ...,
theta^(d-1) with coefficients in E).  Trace and norm are computed from
multiplication matrices in that basis.

`make_extension` canonicalizes the realization so that isomorphic towers
land on identical field objects:

  * base GF(p^a), degree d      ->  the cached GF(p^(a*d)), theta = the
                                    least root of f there;
  * base F(t), f = x^n - (a t + b), a != 0
                                ->  a fresh rational function field F(u)
                                    with t realized as (u^n - b)/a and
                                    theta = u (this covers the purely
                                    inseparable x^p - t shape as well);
  * base F(t), f with constant coefficients
                                ->  F'(t) where F' realizes F[x]/(f_0),
                                    theta the constant root;
  * base Q or a quotient field  ->  the cached quotient ring E[x]/(f),
                                    theta = the class of x.

A caller may instead prescribe the realization (`field`, `theta`, and if the
base is itself an extension, `base_embed`); this is how two different towers
are made to share their top field on purpose.
"""

from __future__ import annotations

from ..errors import MwktError, Unsupported
from . import linalg
from .base import Field, FieldElement
from .finite import FiniteField, finite_field
from .funcfield import RationalFunctionField, rational_function_field
from .poly import Poly
from .rationals import QQ

_FIELD_CACHE: dict = {}
_PRESENTATION_CACHE: dict = {}


def ext_field(base: Field, minpoly: Poly) -> "ExtField":
    """The quotient field E[x]/(f), cached by (base, f) so that repeated
    constructions are identical objects.  Irreducibility is the caller's
    responsibility."""
    assert minpoly.field is base and minpoly.is_monic() and minpoly.degree >= 2
    key = (id(base), minpoly.coeffs)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = ExtField(base, minpoly)
    return _FIELD_CACHE[key]


class ExtElem(FieldElement):
    __slots__ = ("field", "coeffs")

    def __init__(self, field: "ExtField", coeffs: tuple):
        assert len(coeffs) == field.degree
        self.field = field
        self.coeffs = coeffs

    def __add__(self, other):
        assert self.field is other.field
        return ExtElem(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return ExtElem(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        assert self.field is other.field
        f = self.field
        prod = Poly(f.base, self.coeffs) * Poly(f.base, other.coeffs)
        return f._from_poly(prod % f.minpoly)

    def inverse(self):
        f = self.field
        me = Poly(f.base, self.coeffs)
        if me.is_zero():
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = me.xgcd(f.minpoly)
        if g.degree != 0:
            raise MwktError("modulus is not irreducible: found a zero divisor")
        return f._from_poly(s.scale(g.constant_term().inverse()) % f.minpoly)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, ExtElem) and self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __repr__(self):
        return self.field.format_element(self)


class ExtField(Field):
    """E[x]/(f) with power-basis coefficient tuples as elements."""

    def __init__(self, base: Field, minpoly: Poly):
        self.base = base
        self.minpoly = minpoly
        self.degree = minpoly.degree
        self.char = base.char
        self.var = "x"

    def __call__(self, n):
        if isinstance(n, ExtElem) and n.field is self:
            return n
        if isinstance(n, int):
            return self.scalar(self.base(n))
        return self.scalar(self.base(n))

    def scalar(self, c) -> ExtElem:
        return ExtElem(self, (c,) + tuple(self.base.zero() for _ in range(self.degree - 1)))

    def gen(self) -> ExtElem:
        zero, one = self.base.zero(), self.base.one()
        return ExtElem(self, tuple(one if i == 1 else zero for i in range(self.degree)))

    def _from_poly(self, p: Poly) -> ExtElem:
        cs = list(p.coeffs) + [self.base.zero()] * (self.degree - len(p.coeffs))
        return ExtElem(self, tuple(cs))

    def is_square(self, a: ExtElem) -> bool:
        if a.is_zero():
            return True
        if self.base is QQ and self.minpoly.coeffs == tuple(QQ(n) for n in (1, 0, 1)):
            return _gaussian_is_square(a)
        # fall back to factoring y^2 - a over this field
        from .factor import factor_poly

        y2 = Poly(self, [-a, self.zero(), self.one()])
        return any(g.degree == 1 for g, _ in factor_poly(y2))

    def sqrt(self, a: ExtElem):
        if a.is_zero():
            return a
        from .factor import factor_poly

        y2 = Poly(self, [-a, self.zero(), self.one()])
        roots = sorted(
            (-g.constant_term() for g, _ in factor_poly(y2) if g.degree == 1),
            key=self.sort_key,
        )
        return roots[0] if roots else None

    def sort_key(self, a: ExtElem):
        return tuple(self.base.sort_key(c) for c in a.coeffs)

    def random_element(self, rng) -> ExtElem:
        return ExtElem(self, tuple(self.base.random_element(rng) for _ in range(self.degree)))

    def format_element(self, a: ExtElem) -> str:
        return Poly(self.base, a.coeffs).format(self.var)

    def __repr__(self):
        return f"{self.base!r}[x]/({self.minpoly.format('x')})"

    def __str__(self):
        return repr(self)


def _gaussian_is_square(a: ExtElem) -> bool:
    """Squareness in Q(i): clear denominators to a Gaussian integer, then
    demand even prime exponents and residual unit +-1."""
    from math import lcm

    from .arith import g_factor

    x, y = a.coeffs[0].value, a.coeffs[1].value
    m = lcm(x.denominator, y.denominator)
    # a * m^2 is a Gaussian integer with the same square class
    gx = x.numerator * (m // x.denominator) * m
    gy = y.numerator * (m // y.denominator) * m
    unit, factors = g_factor((gx, gy))
    if any(e % 2 for e in factors.values()):
        return False
    # the units that are squares in Q(i) are 1 and -1 = i^2
    return unit in ((1, 0), (-1, 0))


# --------------------------------------------------------------------------


def next_var(var: str) -> str:
    order = ["t", "u", "v", "w"]
    if var in order and order.index(var) + 1 < len(order):
        return order[order.index(var) + 1]
    return var + "_"


class Extension:
    """A finite extension F/E presented by a monic irreducible polynomial.

    Attributes: base, minpoly, field, theta, degree, separable.
    """

    def __init__(self, base, minpoly, field, theta, kind, inner=None, base_embed=None, extra=None):
        self.base = base
        self.minpoly = minpoly
        self.field = field
        self.theta = theta
        self.degree = minpoly.degree
        self._kind = kind
        self._inner = inner  # for the constant-field realization
        self._base_embed = base_embed
        self._to_poly_matrix = None
        for name, value in (extra or {}).items():
            setattr(self, name, value)
        self.separable = not (base.char > 0 and minpoly.derivative().is_zero())
        # sanity: theta really is a root
        val = minpoly(theta, lift=self.embed)
        assert val.is_zero(), "theta does not satisfy the presentation polynomial"

    # --- the two directions of travel --------------------------------------

    def embed(self, a):
        """E -> F."""
        kind = self._kind
        if kind == "trivial":
            return a
        if kind == "finite":
            if self._base_embed is not None:
                return self._base_embed(a)
            return self.field.embed(a)
        if kind == "generic":
            return self.field.scalar(a)
        if kind == "ratfunc_radical":
            F_u = self.field
            t_image = self._t_image
            num = a.num(t_image, lift=lambda c: F_u.constant(c))
            den = a.den(t_image, lift=lambda c: F_u.constant(c))
            return num / den
        if kind == "ratfunc_const":
            inner = self._inner
            Fp_t = self.field
            lift = lambda p: Poly(Fp_t.base, [inner.embed(c) for c in p.coeffs])
            return Fp_t.from_fraction(lift(a.num), lift(a.den))
        if kind == "linalg":
            return self._base_embed(a)
        raise MwktError(f"unknown extension kind {kind}")

    def to_poly(self, b) -> Poly:
        """Write b in the power basis of theta: returns a Poly over E of
        degree < [F:E] with  b = sum_i  coeff_i * theta^i  after embedding."""
        kind = self._kind
        if kind == "trivial":
            return Poly.constant(self.base, b)
        if kind == "generic":
            return Poly(self.base, b.coeffs)
        if kind in ("finite", "linalg"):
            return self._to_poly_linear(b)
        if kind == "ratfunc_radical":
            num_vec = self._fold_radical(b.num)
            den_vec = self._fold_radical(b.den)
            return self._divide_in_basis(num_vec, den_vec)
        if kind == "ratfunc_const":
            num_vec = self._split_const(b.num)
            den_vec = self._split_const(b.den)
            return self._divide_in_basis(num_vec, den_vec)
        raise MwktError(f"unknown extension kind {kind}")

    # --- linear-algebra path ------------------------------------------------

    def _bottom_field(self):
        if self._kind == "finite":
            return finite_field(self.field.p)
        return self.field.base  # linalg: realization is an ExtField over the bottom

    def _flatten(self, c):
        if self._kind == "finite":
            prime = finite_field(self.field.p)
            return [prime(v) for v in c.coeffs]
        return list(c.coeffs)

    def _base_basis(self):
        """Power basis of E over the bottom field, as elements of E."""
        base = self.base
        if isinstance(base, FiniteField):
            from .finite import FFElem

            return [FFElem(base, tuple(1 if i == j else 0 for i in range(base.k))) for j in range(base.k)]
        if isinstance(base, ExtField):
            zero, one = base.base.zero(), base.base.one()
            return [
                ExtElem(base, tuple(one if i == j else zero for i in range(base.degree)))
                for j in range(base.degree)
            ]
        return [base.one()]  # base is the bottom itself

    def _unflatten_base(self, chunk):
        base = self.base
        if isinstance(base, FiniteField):
            from .finite import FFElem

            return FFElem(base, tuple(v.coeffs[0] for v in chunk))
        if isinstance(base, ExtField):
            return ExtElem(base, tuple(chunk))
        assert len(chunk) == 1
        return chunk[0]

    def _to_poly_linear(self, b):
        bottom = self._bottom_field()
        basis = self._base_basis()
        a = len(basis)
        d = self.degree
        if self._to_poly_matrix is None:
            cols = []
            theta_pow = self.field.one()
            for _ in range(d):
                for e in basis:
                    cols.append(self._flatten(self.embed(e) * theta_pow))
                theta_pow = theta_pow * self.theta
            n = len(cols[0])
            assert n == a * d, "realization degree does not match the presentation"
            matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
            inv = linalg.invert(bottom, matrix)
            assert inv is not None, "power basis is degenerate"
            self._to_poly_matrix = inv
        vec = self._flatten(b)
        coords = linalg.mat_vec(self._to_poly_matrix, vec, bottom.zero())
        coeffs = [self._unflatten_base(coords[j * a : (j + 1) * a]) for j in range(d)]
        return Poly(self.base, coeffs)

    # --- rational-function paths ---------------------------------------------

    def _fold_radical(self, g: Poly) -> list:
        """g in F[u]: collect u^m = (a t + b)^(m div n) u^(m mod n) into a
        length-n vector of F(t) elements."""
        E = self.base
        n = self.degree
        m_elem = self._radical_base_value  # a*t + b as an element of F(t)
        out = [E.zero() for _ in range(n)]
        pows = [E.one()]
        for i, c in enumerate(g.coeffs):
            if c.is_zero():
                continue
            q, s = divmod(i, n)
            while len(pows) <= q:
                pows.append(pows[-1] * m_elem)
            out[s] = out[s] + E.constant(c) * pows[q]
        return out

    def _split_const(self, g: Poly) -> list:
        """g in F'[t]: write each coefficient in the theta-power basis of
        F'/F and regroup into a length-d vector of F(t) elements."""
        E = self.base
        inner = self._inner
        d = self.degree
        cols = [[] for _ in range(d)]
        for c in g.coeffs:
            cp = inner.to_poly(c)
            for j in range(d):
                cols[j].append(cp.coeff(j))
        return [E.from_poly(Poly(E.base, col)) for col in cols]

    def _divide_in_basis(self, num_vec, den_vec) -> Poly:
        E = self.base
        f_E = self.minpoly
        pa = Poly(E, num_vec)
        pb = Poly(E, den_vec)
        if pb.is_zero():
            raise ZeroDivisionError
        g, s, _ = pb.xgcd(f_E)
        if g.degree != 0:
            raise MwktError("presentation polynomial is not irreducible")
        inv = s.scale(g.constant_term().inverse())
        return (pa * inv) % f_E

    # --- trace and norm -------------------------------------------------------

    def mult_matrix(self, b):
        """Matrix of multiplication by b in the power basis, columns over E."""
        cols = []
        theta_pow = self.field.one()
        for _ in range(self.degree):
            col = self.to_poly(b * theta_pow)
            cols.append([col.coeff(i) for i in range(self.degree)])
            theta_pow = theta_pow * self.theta
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]

    def trace(self, b):
        m = self.mult_matrix(b)
        acc = self.base.zero()
        for i in range(self.degree):
            acc = acc + m[i][i]
        return acc

    def norm(self, b):
        return linalg.det(self.base, self.mult_matrix(b))

    def random_element(self, rng):
        return self.field.random_element(rng)

    def __repr__(self):
        return f"Extension({self.field!s} / {self.base!s})"


def _find_roots(field, poly: Poly, lift):
    """Roots of an embedded polynomial in a finite field, sorted."""
    roots = [c for c in field.elements() if poly(c, lift=lift).is_zero()]
    roots.sort(key=field.sort_key)
    return roots


def make_extension(base: Field, minpoly: Poly, field=None, theta=None, base_embed=None) -> Extension:
    """Build a presented extension of `base` by the monic irreducible
    `minpoly`, canonicalizing the realization unless one is prescribed."""
    assert minpoly.field is base, "presentation polynomial is over the wrong field"
    if not minpoly.is_monic():
        raise MwktError("presentation polynomial must be monic")
    d = minpoly.degree
    if d < 1:
        raise MwktError("presentation polynomial must have positive degree")

    prescribed = field is not None
    if not prescribed:
        key = (id(base), minpoly.coeffs)
        if key in _PRESENTATION_CACHE:
            return _PRESENTATION_CACHE[key]

    if d == 1:
        ext = Extension(base, minpoly, base, -minpoly.constant_term(), "trivial")
        if not prescribed:
            _PRESENTATION_CACHE[(id(base), minpoly.coeffs)] = ext
        return ext

    if prescribed:
        ext = _prescribed_extension(base, minpoly, field, theta, base_embed)
    elif isinstance(base, FiniteField):
        top = finite_field(base.p, base.k * d)
        roots = _find_roots(top, minpoly, lift=top.embed)
        if not roots:
            raise MwktError("presentation polynomial has no root upstairs; is it irreducible?")
        ext = Extension(base, minpoly, top, roots[0], "finite")
    elif isinstance(base, RationalFunctionField):
        ext = _funcfield_extension(base, minpoly)
    else:
        _check_irreducible(base, minpoly)
        top = ext_field(base, minpoly)
        ext = Extension(base, minpoly, top, top.gen(), "generic")

    if not prescribed:
        _PRESENTATION_CACHE[(id(base), minpoly.coeffs)] = ext
    return ext


def _check_irreducible(base, minpoly):
    from .factor import factor_poly

    try:
        factors = factor_poly(minpoly)
    except Unsupported:
        return  # trust the caller where we cannot check
    if len(factors) != 1 or factors[0][1] != 1:
        raise MwktError(f"presentation polynomial {minpoly.format('x')} is reducible")


def _funcfield_extension(base: RationalFunctionField, minpoly: Poly) -> Extension:
    F = base.base
    d = minpoly.degree

    # shape 1: x^d - (a t + b), a != 0 (includes the inseparable x^p - t)
    middle_zero = all(minpoly.coeff(i).is_zero() for i in range(1, d))
    c0 = -minpoly.constant_term()
    if middle_zero and not c0.is_zero() and c0.is_polynomial() and c0.num.degree == 1:
        a_c = c0.num.coeff(1)
        b_c = c0.num.coeff(0)
        new = rational_function_field(F, next_var(base.var))
        # t = (u^d - b)/a
        t_num = Poly.gen(F) ** d - Poly.constant(F, b_c)
        extra = {
            "_t_image": new.from_fraction(t_num, Poly.constant(F, a_c)),
            "_radical_base_value": base.from_poly(Poly(F, [b_c, a_c])),
        }
        return Extension(base, minpoly, new, new.gen(), "ratfunc_radical", extra=extra)

    # shape 2: constant coefficients
    if all(c.is_polynomial() and c.num.degree <= 0 for c in minpoly.coeffs):
        f0 = Poly(F, [c.num.constant_term() for c in minpoly.coeffs])
        inner = make_extension(F, f0)
        new = rational_function_field(inner.field, base.var)
        theta = new.constant(inner.theta)
        return Extension(base, minpoly, new, theta, "ratfunc_const", inner=inner)

    # generic fallback: arithmetic works, equality engines will refuse
    top = ext_field(base, minpoly)
    return Extension(base, minpoly, top, top.gen(), "generic")


def _prescribed_extension(base, minpoly, field, theta, base_embed) -> Extension:
    if isinstance(field, FiniteField):
        assert isinstance(base, FiniteField) and base.p == field.p
        assert field.k == base.k * minpoly.degree
        return Extension(base, minpoly, field, theta, "finite", base_embed=base_embed)
    if isinstance(field, ExtField):
        if base is field.base:
            if base_embed is None:
                base_embed = field.scalar
        else:
            assert base_embed is not None, "prescribed realization over a tower needs base_embed"
        return Extension(base, minpoly, field, theta, "linalg", base_embed=base_embed)
    raise Unsupported(f"cannot prescribe a realization in {field!r}")
