"""Places of a rational function field F(t) and their residue fields.

A finite place is a monic irreducible polynomial pi in F[t]; its residue
field is presented as the extension F[theta]/(pi) through `make_extension`,
so reduction of a regular function lands in a canonically realized field.
The infinite place has residue field F and canonical uniformizer -1/t; the
sign is a package-wide convention that the residue calculus depends on, and
everything downstream routes uniformizer choices through the residue layer
rather than this module.

`valuation` and `reduce` are the only primitives: order of vanishing, and
evaluation of a regular function in the residue field.
"""

from __future__ import annotations

from ..errors import MwktError
from .extension import make_extension
from .factor import factor_poly
from .funcfield import RationalFunctionField, RFElem
from .poly import Poly

_PLACE_CACHE: dict = {}


class Place:
    __slots__ = ("field", "kind", "pi", "ext", "residue_field", "degree")

    def __init__(self, field: RationalFunctionField, kind: str, pi=None):
        self.field = field
        self.kind = kind
        if kind == "finite":
            assert pi is not None and pi.is_monic() and pi.degree >= 1
            self.pi = pi
            self.ext = make_extension(field.base, pi)
            self.residue_field = self.ext.field
            self.degree = pi.degree
        else:
            assert kind == "infinite"
            self.pi = None
            self.ext = None
            self.residue_field = field.base
            self.degree = 1

    # --- uniformizers -------------------------------------------------------

    def uniformizer(self) -> RFElem:
        """The canonical uniformizer: pi itself, or -1/t at infinity."""
        F = self.field
        if self.kind == "finite":
            return F.from_poly(self.pi)
        one = Poly.constant(F.base, F.base.one())
        return F.from_fraction(-one, Poly.gen(F.base))

    # --- the two primitives ---------------------------------------------------

    def valuation(self, f: RFElem) -> int:
        if f.is_zero():
            raise MwktError("the zero function has no finite valuation")
        if self.kind == "infinite":
            return f.den.degree - f.num.degree
        v = 0
        num = f.num
        while True:
            q, r = num.divmod(self.pi)
            if not r.is_zero():
                break
            num = q
            v += 1
        den = f.den
        while True:
            q, r = den.divmod(self.pi)
            if not r.is_zero():
                break
            den = q
            v -= 1
        return v

    def reduce(self, f: RFElem):
        """Evaluate a function with valuation >= 0 in the residue field."""
        if f.is_zero():
            if self.kind == "infinite":
                return self.field.base.zero()
            return self.ext.field.zero()
        if self.kind == "infinite":
            dn, dd = f.num.degree, f.den.degree
            if dn > dd:
                raise MwktError("pole at infinity: cannot reduce")
            if dn < dd:
                return self.field.base.zero()
            return f.num.leading() / f.den.leading()
        theta = self.ext.theta
        lift = self.ext.embed  # coefficients live in F = field.base
        den_val = f.den(theta, lift=lift)
        if den_val.is_zero():
            raise MwktError("pole at the place: cannot reduce")
        return f.num(theta, lift=lift) / den_val

    def unit_part(self, f: RFElem):
        """f = uniformizer^v * w with w a unit; returns (v, w)."""
        v = self.valuation(f)
        if v == 0:
            return 0, f
        return v, f * self.uniformizer() ** (-v)

    def reduce_unit(self, f: RFElem):
        v, w = self.unit_part(f)
        assert v == 0, "not a unit at this place"
        return self.reduce(w)

    # --- identity -------------------------------------------------------------

    def sort_key(self):
        if self.kind == "infinite":
            return (1, 0, ())
        return (0, self.pi.degree, self.pi.sort_key())

    def __eq__(self, other):
        return (
            isinstance(other, Place)
            and self.field is other.field
            and self.kind == other.kind
            and (self.pi == other.pi if self.kind == "finite" else True)
        )

    def __hash__(self):
        return hash((id(self.field), self.kind, self.pi.coeffs if self.pi is not None else None))

    def __repr__(self):
        if self.kind == "infinite":
            return "(inf)"
        return f"({self.pi.format(self.field.var)})"


def finite_place(field: RationalFunctionField, pi: Poly) -> Place:
    key = (id(field), pi.coeffs)
    if key not in _PLACE_CACHE:
        _PLACE_CACHE[key] = Place(field, "finite", pi.monic())
    return _PLACE_CACHE[key]


def infinite_place(field: RationalFunctionField) -> Place:
    key = (id(field), None)
    if key not in _PLACE_CACHE:
        _PLACE_CACHE[key] = Place(field, "infinite")
    return _PLACE_CACHE[key]


def rational_place(field: RationalFunctionField, a) -> Place:
    """The place t = a for a constant a."""
    return finite_place(field, Poly(field.base, [-a, field.base.one()]))


def places_of_support(f: RFElem):
    """The places where f has a zero or a pole, sorted (finite places by
    degree then coefficients, the infinite place last)."""
    if f.is_zero():
        raise MwktError("the zero function has no support")
    out = []
    for g, _ in factor_poly(f.num):
        out.append(finite_place(f.field, g))
    for g, _ in factor_poly(f.den):
        p = finite_place(f.field, g)
        if p not in out:
            out.append(p)
    if f.num.degree != f.den.degree:
        out.append(infinite_place(f.field))
    out.sort(key=lambda p: p.sort_key())
    return out
