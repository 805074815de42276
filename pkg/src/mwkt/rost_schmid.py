"""Rost-Schmid complexes on curve-like schemes.

A scheme descriptor is one of: a point Spec F, the affine line over F, the
projective line over F, the spectrum of a valuation ring inside F(t), or a
finite disjoint union of these.  Dimension is at most one, so a complex has
two levels: the generic points in codimension 0 and the closed points in
codimension 1.  Closed points of the line are monic irreducible polynomials,
plus the point at infinity on the projective line; their twists are
trivialized once and for all by taking the class of the monic uniformizer as
the generator, which is what lets cycle entries live in plain (untwisted)
Milnor-Witt groups.

The differential takes residues of the generic entry against the canonical
uniformizers.  Pushforward along a finite cover applies residue-field
transfers entrywise; those transfers, and the generic-stage transfer, are
the bare residue-at-infinity composites (`geometric_transfer`), because in
that convention the residue of a transfer is the plain sum of transferred
residues and the complex maps commute on the nose.  Pullback along the
structure map or a constants extension restricts entrywise, splitting closed
points into the points above them.  The unit action rescales every entry by
the unit's value at the point.

The boundary map of a closed/open decomposition takes residues at the closed
points only.  In dimension one its anticommutation square against the
differentials has a zero corner, so it is recorded but carries no testable
content here.
"""

from __future__ import annotations

from .errors import MwktError, Unsupported
from .fields import (
    Extension,
    FiniteField,
    Poly,
    RationalFunctionField,
    factor_poly,
    rational_function_field,
    make_extension,
)
from .fields.places import Place, finite_place, infinite_place, places_of_support
from .gw import GWClass
from .kmw import MWElement, map_symbols
from .residues import milnor_reconstruct, residue, restrict
from .transfers import (
    finite_subextension,
    geometric_transfer,
    residue_field_transfer,
)

# --------------------------------------------------------------------------
# schemes and points
# --------------------------------------------------------------------------


class Scheme:
    """Curve-like scheme descriptor.

    kind is one of "point", "affine", "proj", "local", "union".  Points are
    encoded as None for a generic (or unique) point, a Place for a closed
    point, and (index, point) pairs on unions.
    """

    __slots__ = ("kind", "constants", "function_field", "place", "parts")

    def __init__(self, kind, constants=None, function_field=None, place=None, parts=()):
        self.kind = kind
        self.constants = constants
        self.function_field = function_field
        self.place = place
        self.parts = tuple(parts)

    @property
    def dimension(self) -> int:
        if self.kind == "point":
            return 0
        if self.kind == "union":
            return max((p.dimension for p in self.parts), default=0)
        return 1

    def __eq__(self, other):
        if not isinstance(other, Scheme):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.kind == "union":
            return self.parts == other.parts
        if self.kind == "local":
            return self.place == other.place
        return self.constants is other.constants and self.function_field is other.function_field

    def __hash__(self):
        if self.kind == "union":
            return hash((self.kind, self.parts))
        if self.kind == "local":
            return hash((self.kind, self.place))
        return hash((self.kind, id(self.constants), id(self.function_field)))

    def __repr__(self):
        if self.kind == "point":
            return f"Spec {self.constants}"
        if self.kind == "affine":
            return f"A^1({self.constants})"
        if self.kind == "proj":
            return f"P^1({self.constants})"
        if self.kind == "local":
            return f"Spec O_({self.place.uniformizer()})"
        return " + ".join(repr(p) for p in self.parts)

    # -- point bookkeeping ---------------------------------------------

    def point_field(self, point):
        """Residue field of a point of this scheme."""
        if self.kind == "union":
            i, sub = point
            return self.parts[i].point_field(sub)
        if point is None:
            if self.kind == "point":
                return self.constants
            return self.function_field
        if self.kind == "point":
            raise MwktError("a point scheme has only its generic point")
        assert isinstance(point, Place) and point.field is self.function_field
        if self.kind == "affine" and point.kind != "finite":
            raise MwktError("the affine line has no point at infinity")
        if self.kind == "local" and point != self.place:
            raise MwktError("the local scheme has a single closed point")
        return point.residue_field

    def point_codim(self, point) -> int:
        if self.kind == "union":
            return self.parts[point[0]].point_codim(point[1])
        return 0 if point is None else 1


def point_scheme(F) -> Scheme:
    return Scheme("point", constants=F)


def affine_line(F, var: str = "t") -> Scheme:
    return Scheme("affine", constants=F, function_field=rational_function_field(F, var))


def proj_line(F, var: str = "t") -> Scheme:
    return Scheme("proj", constants=F, function_field=rational_function_field(F, var))


def local_scheme(v: Place) -> Scheme:
    return Scheme("local", constants=v.field.base, function_field=v.field, place=v)


def disjoint_union(*parts) -> Scheme:
    return Scheme("union", parts=parts)


# --------------------------------------------------------------------------
# cycles
# --------------------------------------------------------------------------


class Cycle:
    """A finitely supported element of the complex in one codimension.

    `n` is the degree of the instance: entries at a codimension-p point live
    in degree n - p over the residue field of the point.  Zero entries are
    dropped at construction, so support lists are canonical.
    """

    __slots__ = ("scheme", "n", "codim", "entries")

    def __init__(self, scheme: Scheme, n: int, codim: int, entries):
        assert codim in (0, 1)
        self.scheme = scheme
        self.n = n
        self.codim = codim
        kept = {}
        for point, value in entries.items():
            assert scheme.point_codim(point) == codim, "support point in the wrong codimension"
            assert value.field is scheme.point_field(point), "entry over the wrong residue field"
            assert value.n == n - codim, "entry in the wrong degree"
            if not value.is_zero():
                kept[point] = value
        self.entries = kept

    # -- algebra ---------------------------------------------------------

    def __add__(self, other):
        assert isinstance(other, Cycle)
        assert self.scheme == other.scheme and self.n == other.n and self.codim == other.codim
        out = dict(self.entries)
        for point, value in other.entries.items():
            out[point] = out[point] + value if point in out else value
        return Cycle(self.scheme, self.n, self.codim, out)

    def __neg__(self):
        return Cycle(self.scheme, self.n, self.codim,
                     {p: -v for p, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.entries.values())

    def eq(self, other) -> bool:
        return (self - other).is_zero()

    def support(self):
        return sorted(self.entries, key=_point_sort_key)

    def __repr__(self):
        if not self.entries:
            return "{ }"
        bits = []
        for point in self.support():
            key = _point_label(point)
            bits.append(f"{key}: {self.entries[point]}")
        return "{ " + ", ".join(bits) + " }"


def _point_label(point) -> str:
    if point is None:
        return "gen"
    if isinstance(point, tuple):
        return f"{point[0]}/{_point_label(point[1])}"
    if point.kind == "infinite":
        return "inf"
    return f"({point.uniformizer()})"


def _point_sort_key(point):
    if point is None:
        return (0,)
    if isinstance(point, tuple):
        return (3, point[0]) + _point_sort_key(point[1])
    if point.kind == "infinite":
        return (2,)
    return (1, point.sort_key())


def generic_cycle(scheme: Scheme, beta: MWElement) -> Cycle:
    """The codimension-0 cycle carried by a single generic-point class."""
    assert scheme.kind != "union"
    return Cycle(scheme, beta.n, 0, {None: beta})


# --------------------------------------------------------------------------
# the differential
# --------------------------------------------------------------------------


def _residue_places(scheme: Scheme, beta: MWElement):
    """Closed points of the scheme where the class can have a residue."""
    if scheme.kind == "local":
        return [scheme.place]
    seen = []
    for (_, entries) in beta.terms:
        for u in entries:
            for p in places_of_support(u):
                if p.kind == "infinite" and scheme.kind != "proj":
                    continue
                if p not in seen:
                    seen.append(p)
    return seen


def differential(c: Cycle) -> Cycle:
    """Total residue map from codimension 0 to codimension 1."""
    X = c.scheme
    if X.kind == "union":
        out = {}
        for i, comp in _split_union(c).items():
            for point, entry in differential(comp).entries.items():
                out[(i, point)] = entry
        return Cycle(X, c.n, 1, out)
    if X.dimension > 1:
        raise Unsupported("differentials are only provided in dimension <= 1")
    assert c.codim == 0
    if X.dimension == 0:
        return Cycle(X, c.n, 1, {})
    beta = c.entries.get(None)
    out = {}
    if beta is not None:
        for w in _residue_places(X, beta):
            r = residue(beta, w)
            if not r.is_zero():
                out[w] = r
    return Cycle(X, c.n, 1, out)


def _split_union(c: Cycle):
    parts = {}
    for (i, sub), value in c.entries.items():
        parts.setdefault(i, {})[sub] = value
    return {
        i: Cycle(c.scheme.parts[i], c.n, c.codim, entries)
        for i, entries in parts.items()
    }


# --------------------------------------------------------------------------
# finite morphisms and pushforward
# --------------------------------------------------------------------------


class CurveMap:
    """A morphism descriptor between scheme descriptors.

    kinds: "identity"; "coordinate" for t -> g(t) on the line (g a monomial
    plus a constant, so the cover stays inside rational function fields);
    "constants" for the projection along a finite constants extension;
    "structure" for the map from the line to the base point; "base" for a
    constants extension read as the map it is pulled back along.
    """

    __slots__ = ("kind", "source", "target", "poly", "ext")

    def __init__(self, kind, source, target, poly=None, ext=None):
        self.kind = kind
        self.source = source
        self.target = target
        self.poly = poly
        self.ext = ext

    def __repr__(self):
        if self.kind == "coordinate":
            return f"t -> {self.poly} on {self.target}"
        return f"{self.kind}: {self.source} -> {self.target}"


def identity_map(X: Scheme) -> CurveMap:
    return CurveMap("identity", X, X)


def coordinate_map(X: Scheme, g: Poly) -> CurveMap:
    """The self-cover t -> g(t) of the affine or projective line.

    Only monic g = t^d + b is admitted.  Monomial-plus-constant keeps the
    fiber equation x^d - (t - b) inside a rational function field, which is
    the shape every residue computation here needs; monic makes that
    equation the minimal polynomial itself, so the derivative classes of
    composable covers satisfy the chain rule exactly and pushforward is
    functorial (a leading coefficient would skew them by its square class).
    """
    if X.kind not in ("affine", "proj"):
        raise Unsupported("coordinate covers live on the line")
    F = X.constants
    assert g.field is F
    d = g.degree
    if d < 1:
        raise MwktError("a constant does not define a finite cover")
    if any(not c.is_zero() for c in g.coeffs[1:d]):
        raise Unsupported("only monomial-plus-constant coordinate maps are supported")
    if g.coeffs[d] != F.one():
        raise Unsupported("only monic coordinate maps are supported")
    return CurveMap("coordinate", X, X, poly=g)


def constants_map(source: Scheme, target: Scheme, ext: Extension = None) -> CurveMap:
    """The finite projection from a scheme over F' to the same scheme over F,
    along a constants extension F'/F."""
    if source.kind != target.kind:
        raise MwktError("a constants projection preserves the scheme shape")
    F, Fp = target.constants, source.constants
    if ext is None:
        if not (isinstance(F, FiniteField) and isinstance(Fp, FiniteField)):
            raise Unsupported("give the extension explicitly away from finite fields")
        ext = finite_subextension(F, Fp)
    assert ext.base is F and ext.field is Fp
    if source.kind in ("affine", "proj"):
        if not isinstance(F, FiniteField):
            raise Unsupported("constants projections of the line need finite constants")
        assert source.function_field.var == target.function_field.var
    elif source.kind != "point":
        raise Unsupported("constants projections cover points and lines only")
    return CurveMap("constants", source, target, ext=ext)


def structure_map(X: Scheme) -> CurveMap:
    """The smooth map from the line over F down to Spec F."""
    if X.kind not in ("affine", "proj"):
        raise Unsupported("structure maps are provided for the line")
    return CurveMap("structure", X, point_scheme(X.constants))


def base_extension(source: Scheme, target: Scheme, ext: Extension = None) -> CurveMap:
    """The same data as a constants projection, used on the pullback side."""
    m = constants_map(source, target, ext)
    return CurveMap("base", source, target, ext=m.ext)


def compose_maps(f2: CurveMap, f1: CurveMap) -> CurveMap:
    """The composite f2 after f1, when the shapes allow it."""
    assert f1.target == f2.source
    if f1.kind == "identity":
        return f2
    if f2.kind == "identity":
        return f1
    if f1.kind == "coordinate" and f2.kind == "coordinate":
        g1, g2 = f1.poly, f2.poly
        acc = Poly(g2.field, [g2.coeffs[-1]])
        for c in reversed(g2.coeffs[:-1]):
            acc = acc * g1 + Poly(g2.field, [c])
        return coordinate_map(f1.source, acc)
    if f1.kind in ("constants", "base") and f2.kind == f1.kind:
        F = f2.target.constants
        Fp = f1.source.constants
        if isinstance(F, FiniteField) and isinstance(Fp, FiniteField):
            ctor = constants_map if f1.kind == "constants" else base_extension
            return ctor(f1.source, f2.target)
    raise Unsupported("composite of these morphism kinds is not provided")


def _constant_pullback(F: FiniteField, value: "FiniteField element", K: FiniteField):
    """Invert the canonical embedding F -> K on an element known to land in it."""
    if value.is_zero():
        return F.zero()
    ratio = (K.q - 1) // (F.q - 1)
    d = K.dlog[value.coeffs]
    assert d % ratio == 0, "element does not come from the subfield"
    return F.from_dlog(d // ratio)


def _minpoly_over(F: FiniteField, alpha, K: FiniteField) -> Poly:
    """The minimal polynomial over F of an element of a finite overfield,
    computed as the product over its Frobenius orbit."""
    orbit = [alpha]
    probe = alpha**F.q
    while probe != alpha:
        orbit.append(probe)
        probe = probe**F.q
    acc = Poly(K, [K.one()])
    for root in orbit:
        acc = acc * Poly(K, [-root, K.one()])
    return Poly(F, [_constant_pullback(F, c, K) for c in acc.coeffs])


def _closed_image(F: FiniteField, E: RationalFunctionField, alpha, K: FiniteField):
    """The closed point downstairs hit by a residue-field element, with the
    geometric transfer into it.

    alpha is the image in K = kappa(x) of the downstairs coordinate; the
    point below is cut out by its minimal polynomial, and the transfer
    follows the embedding sending the class of the coordinate to alpha."""
    pi = _minpoly_over(F, alpha, K)
    y = finite_place(E, pi)
    ky = y.residue_field
    gi = y.ext.to_poly(ky.gen())(alpha, lift=K.embed)
    return y, residue_field_transfer(ky, K, gi, normalized=False)


def _coordinate_cover(f: CurveMap) -> Extension:
    """Present the function field upstairs of t -> g(t) over the one below."""
    E = f.target.function_field
    g = f.poly
    d = g.degree
    b = g.coeffs[0]
    c0 = E.constant(b) - E.gen()
    coeffs = [c0] + [E.zero()] * (d - 1) + [E.one()]
    cover = make_extension(E, Poly(E, coeffs))
    if not isinstance(cover.field, RationalFunctionField):
        raise Unsupported("coordinate cover did not land in a rational function field")
    return cover


def _constants_cover(f: CurveMap) -> Extension:
    """Present F'(t) over F(t) by lifting the constants' minimal polynomial."""
    E = f.target.function_field
    pi = Poly(E, [E.constant(c) for c in f.ext.minpoly.coeffs])
    cover = make_extension(E, pi)
    assert cover.field is f.source.function_field, "constants cover must realize the upstairs field"
    return cover


def pushforward(f: CurveMap, c: Cycle) -> Cycle:
    """Finite pushforward: transfer every entry along its residue-field
    extension (bare normalization, so the differentials commute)."""
    if f.kind == "identity":
        assert c.scheme == f.source
        return c
    if f.kind not in ("coordinate", "constants"):
        raise Unsupported(f"{f.kind} morphisms are not finite pushforward data")
    assert c.scheme == f.source
    Y = f.target
    F = Y.constants

    if f.kind == "constants" and f.source.kind == "point":
        beta = c.entries.get(None)
        out = {}
        if beta is not None:
            out[None] = geometric_transfer(f.ext, beta)
        return Cycle(Y, c.n, c.codim, out)

    E = Y.function_field
    if f.kind == "coordinate":
        cover = _coordinate_cover(f) if f.poly.degree > 1 else None
    else:
        cover = _constants_cover(f)
    out = {}

    def accumulate(point, value):
        out[point] = out[point] + value if point in out else value

    for point, value in c.entries.items():
        if point is None:
            if f.kind == "coordinate" and f.poly.degree == 1:
                # a shift of the line: substitute the inverse coordinate
                inv = E.gen() - E.constant(f.poly.coeffs[0])
                accumulate(None, map_symbols(
                    value, E,
                    lambda x: x.num(inv, lift=E.constant) / x.den(inv, lift=E.constant),
                ))
                continue
            if f.kind == "coordinate":
                up = cover.field
                value = map_symbols(value, up, lambda x: up.from_fraction(x.num, x.den))
            accumulate(None, geometric_transfer(cover, value))
        elif point.kind == "infinite":
            if f.kind == "coordinate":
                # a polynomial cover fixes infinity and kappa is F on both sides
                accumulate(infinite_place(E), value)
            else:
                tr = residue_field_transfer(F, f.ext.field, f.ext.field.embed(F.gen()),
                                            normalized=False)
                accumulate(infinite_place(E), tr(value))
        else:
            K = point.residue_field
            if f.kind == "coordinate":
                g_elem = f.source.function_field.from_poly(f.poly)
                alpha = point.reduce(g_elem)
            else:
                alpha = point.ext.theta
            y, tr = _closed_image(F, E, alpha, K)
            accumulate(y, tr(value))
    return Cycle(Y, c.n, c.codim, out)


# --------------------------------------------------------------------------
# pullback
# --------------------------------------------------------------------------


def pullback(g: CurveMap, c: Cycle) -> Cycle:
    """Restriction along a smooth map, splitting closed points into their
    fibers; constants extensions here are separable, so every fiber point is
    reduced and no multiplicity bookkeeping is needed."""
    if g.kind == "identity":
        assert c.scheme == g.target
        return c
    assert c.scheme == g.target
    if g.kind == "structure":
        assert c.codim == 0, "the base point has no codimension-1 cycles"
        X = g.source
        ff = X.function_field
        out = {}
        beta = c.entries.get(None)
        if beta is not None:
            out[None] = restrict(beta, ff)
        return Cycle(X, c.n, 0, out)
    if g.kind != "base":
        raise Unsupported(f"{g.kind} morphisms are not pullback data here")
    ext = g.ext
    X = g.source
    if X.kind == "point":
        beta = c.entries.get(None)
        out = {}
        if beta is not None:
            out[None] = map_symbols(beta, ext.field, ext.embed)
        return Cycle(X, c.n, c.codim, out)

    ff = X.function_field
    Fp = X.constants
    out = {}
    for point, value in c.entries.items():
        if point is None:
            out[None] = map_symbols(
                value, ff,
                lambda x: ff.from_fraction(
                    Poly(Fp, [ext.embed(u) for u in x.num.coeffs]),
                    Poly(Fp, [ext.embed(u) for u in x.den.coeffs]),
                ),
            )
        elif point.kind == "infinite":
            out[infinite_place(ff)] = map_symbols(value, Fp, ext.embed)
        else:
            pulled = Poly(Fp, [ext.embed(u) for u in point.pi.coeffs])
            for h, e in factor_poly(pulled):
                assert e == 1, "constants extensions are separable"
                w = finite_place(ff, h)
                kw = w.residue_field
                theta = w.ext.theta
                out[w] = map_symbols(
                    value, kw, lambda u: point.ext.to_poly(u)(theta, lift=kw.embed)
                )
    return Cycle(X, c.n, c.codim, out)


# --------------------------------------------------------------------------
# unit action and boundary
# --------------------------------------------------------------------------


def gw_action(a, c: Cycle) -> Cycle:
    """Entrywise multiplication by <a(x)> for a global unit a.

    On the line the global units are the nonzero constants; on a local
    scheme any function of valuation zero at the closed point serves."""
    X = c.scheme
    if X.kind == "union":
        raise Unsupported("act on the components of a union directly")
    F = X.constants
    if X.kind == "local" and a.field is X.function_field:
        if X.place.valuation(a) != 0:
            raise MwktError("the function is not a unit at the closed point")
        out = {}
        for point, value in c.entries.items():
            u = a if point is None else X.place.reduce(a)
            out[point] = value.act(GWClass.unit(u))
        return Cycle(X, c.n, c.codim, out)
    assert a.field is F
    if a.is_zero():
        raise MwktError("zero is not a unit")
    out = {}
    for point, value in c.entries.items():
        k = X.point_field(point)
        if k is F:
            u = a
        elif isinstance(k, RationalFunctionField):
            u = k.constant(a)
        else:
            u = k.embed(a)
        out[point] = value.act(GWClass.unit(u))
    return Cycle(X, c.n, c.codim, out)


def boundary_triple(c: Cycle, closed) -> Cycle:
    """The boundary map of the open complement of a finite closed set:
    residues of the generic entry at the named closed points only.

    Its anticommutation against the differentials of the two strata has a
    zero corner in dimension one, so nothing further is checked here."""
    X = c.scheme
    assert c.codim == 0 and X.dimension == 1
    beta = c.entries.get(None)
    out = {}
    if beta is not None:
        for w in closed:
            r = residue(beta, w)
            if not r.is_zero():
                out[w] = r
    return Cycle(X, c.n, 1, out)


# --------------------------------------------------------------------------
# sections of the complex in degree zero
# --------------------------------------------------------------------------


class A0:
    """Membership and presentation for the kernel of the differential at
    level zero.

    On the affine line the kernel is exactly the constants (split exact
    sequence), and `witness` returns the constant class; on the projective
    line the test includes the place at infinity and the same witness
    applies; on a point scheme everything is a kernel element; on a local
    scheme only membership is decided."""

    def __init__(self, scheme: Scheme, n: int):
        if scheme.kind == "union":
            raise Unsupported("take sections componentwise on a union")
        self.scheme = scheme
        self.n = n

    def contains(self, beta: MWElement) -> bool:
        X = self.scheme
        assert beta.n == self.n
        if X.kind == "point":
            assert beta.field is X.constants
            return True
        assert beta.field is X.function_field
        return differential(generic_cycle(X, beta)).is_zero()

    def witness(self, beta: MWElement) -> MWElement:
        X = self.scheme
        if X.kind == "point":
            return beta
        if X.kind not in ("affine", "proj"):
            raise Unsupported("witnesses are provided on the line and on points")
        if not self.contains(beta):
            raise MwktError("the class has a nonzero residue")
        c, parts = milnor_reconstruct(beta)
        assert all(r.is_zero() for _, r in parts)
        assert restrict(c, X.function_field).eq(beta)
        return c

    def section(self, m: MWElement) -> MWElement:
        X = self.scheme
        if X.kind == "point":
            assert m.field is X.constants
            return m
        return restrict(m, X.function_field)


def a0(scheme: Scheme, n: int) -> A0:
    return A0(scheme, n)
