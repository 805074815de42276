"""Residue, specialization and coresidue maps on K^MW of a rational
function field.

The residue at a place v with chosen uniformizer pi sends degree n to
degree n-1 over the residue field.  It is computed by a terminating rewrite
on working monomials

    (m, f, U)  <->  eta^m [pi]^f [u_1]...[u_k],   f in {0, 1},

with integer coefficients, where the u_i are v-units of the function field.
Every symbol entry pi^k w splits through [xy] = [x] + [y] + eta [x][y] and
the power rules

    [pi^k]   = [pi] + [pi^(k-1)] + eta [pi][pi^(k-1)]      (k >= 2)
    [pi^-j]  = -[pi^j] - eta [pi^j][pi^j]                  (j >= 1)

and products fold into the normal form by moving any new [pi] to the front.
Each swap across a unit entry costs eps = -<-1>; eps acts trivially once an
eta is present, and on eta-free monomials expands as

    eps X = -X - eta [-1] X.

A repeated uniformizer resolves through [pi][pi] = eps [pi][-1], which keeps
a single f flag sufficient.  The residue keeps the f = 1 monomials with
their unit entries reduced into the residue field; reduced entries equal to
1 kill their term.

Specialization at v is total here: s(gamma) = residue of [pi] * gamma.  On
elements with zero residue it is the section of the constants inclusion and
does not depend on the uniformizer.

The coresidue against a finite place x builds [pi_x] * lift(beta), with
entries of beta lifted along the power-basis section of the residue field
(numerator degree below deg pi_x), then repairs the unwanted residues at
the finitely many spurious places, all of degree strictly below deg pi_x,
by recursion.  The result has residue beta at x and residue zero at every
other finite place.
"""

from __future__ import annotations

from .errors import MwktError, Unsupported
from .fields import RationalFunctionField
from .fields.places import Place, places_of_support
from .kmw import MWElement

# --------------------------------------------------------------------------
# working-monomial rewrite
# --------------------------------------------------------------------------


def _mul_eps(coeff: int, term: tuple, j: int, neg1):
    """(coeff, term) * eps^j as a list of weighted working monomials."""
    if j % 2 == 0:
        return [(coeff, term)]
    m, f, U = term
    if m >= 1:
        return [(coeff, term)]
    return [(-coeff, term), (-coeff, (1, f, (neg1,) + U))]


def _append_pi(coeff: int, term: tuple, neg1):
    """(coeff, term) * [pi]."""
    m, f, U = term
    if f == 0:
        return _mul_eps(coeff, (m, 1, U), len(U), neg1)
    return _mul_eps(coeff, (m, 1, (neg1,) + U), len(U) + 1, neg1)


def _term_product(c1: int, t1: tuple, c2: int, t2: tuple, neg1):
    m1, f1, U1 = t1
    m2, f2, U2 = t2
    acc = [(c1 * c2, (m1 + m2, f1, U1))]
    if f2:
        acc = [piece for c, t in acc for piece in _append_pi(c, t, neg1)]
    if U2:
        acc = [(c, (m, f, U + U2)) for c, (m, f, U) in acc]
    return acc


def _combine(left: list, right: list, neg1) -> list:
    out = []
    for c1, t1 in left:
        for c2, t2 in right:
            out.extend(_term_product(c1, t1, c2, t2, neg1))
    return _collect(out)


def _collect(pieces: list) -> list:
    acc = {}
    for c, t in pieces:
        acc[t] = acc.get(t, 0) + c
    return [(c, t) for t, c in acc.items() if c != 0]


def _pi_power(k: int, neg1) -> list:
    """[pi^k] as working monomials."""
    if k == 0:
        return []
    if k == 1:
        return [(1, (0, 1, ()))]
    if k < 0:
        p = _pi_power(-k, neg1)
        eta_p2 = [(c, (m + 1, f, U)) for c, (m, f, U) in _combine(p, p, neg1)]
        return _collect([(-c, t) for c, t in p] + [(-c, t) for c, t in eta_p2])
    p1 = _pi_power(1, neg1)
    rest = _pi_power(k - 1, neg1)
    cross = [(c, (m + 1, f, U)) for c, (m, f, U) in _combine(p1, rest, neg1)]
    return _collect(p1 + rest + cross)


def _entry_expansion(k: int, w, neg1) -> list:
    """[pi^k w] as working monomials; w is a unit at the place."""
    if k == 0:
        return [] if w.is_one() else [(1, (0, 0, (w,)))]
    pk = _pi_power(k, neg1)
    if w.is_one():
        return pk
    w_term = [(1, (0, 0, (w,)))]
    cross = [(c, (m + 1, f, U)) for c, (m, f, U) in _combine(pk, w_term, neg1)]
    return _collect(pk + w_term + cross)


# --------------------------------------------------------------------------
# the boundary maps
# --------------------------------------------------------------------------


def residue(gamma: MWElement, place: Place, uniformizer=None) -> MWElement:
    """The residue at a place, taken with respect to its canonical
    uniformizer (the monic generator; -1/t at infinity) unless another
    uniformizer element is supplied."""
    F = gamma.field
    assert isinstance(F, RationalFunctionField) and place.field is F
    pi = uniformizer if uniformizer is not None else place.uniformizer()
    assert place.valuation(pi) == 1, "uniformizer must have valuation 1"
    kappa = place.residue_field
    # Unit entries are reduced into the residue field up front: no rewrite
    # step ever looks inside a unit (they only get appended, or joined by
    # fresh -1 entries), and reducing first lets the collection step merge
    # what would otherwise be an exponential cascade of distinct tuples.
    neg1 = -kappa.one()
    out = {}
    for (m, U), c in gamma.terms.items():
        acc = [(c, (m, 0, ()))]
        for u in U:
            k = place.valuation(u)
            w = place.reduce(u * pi ** (-k) if k else u)
            acc = _combine(acc, _entry_expansion(k, w, neg1), neg1)
            if not acc:
                break
        for coeff, (mm, f, UU) in acc:
            if not f:
                continue
            assert len(UU) - mm == gamma.n - 1
            key = (mm, UU)
            out[key] = out.get(key, 0) + coeff
    return MWElement(kappa, gamma.n - 1, out)


def specialize(gamma: MWElement, place: Place, uniformizer=None) -> MWElement:
    """s(gamma) = residue([pi] * gamma); on residue-free elements this is
    the section of the constants inclusion, independent of the choice."""
    F = gamma.field
    pi = uniformizer if uniformizer is not None else place.uniformizer()
    shifted = MWElement(
        F,
        gamma.n + 1,
        {(m, (pi,) + U): c for (m, U), c in gamma.terms.items()},
        gamma.twist,
    )
    return residue(shifted, place, uniformizer=pi)


def restrict(c: MWElement, F: RationalFunctionField) -> MWElement:
    """Constants inclusion M(k) -> M(k(t)), entrywise."""
    assert F.base is c.field
    return MWElement(
        F,
        c.n,
        {(m, tuple(F.constant(u) for u in U)): v for (m, U), v in c.terms.items()},
        c.twist,
    )


# --------------------------------------------------------------------------
# coresidue
# --------------------------------------------------------------------------

_CORES_CACHE: dict = {}


def coresidue(beta: MWElement, place: Place) -> MWElement:
    """An element of M(F(t)) with residue beta at the given finite place and
    residue zero at every other finite place."""
    assert place.kind == "finite", "coresidue needs a finite place"
    F = place.field
    assert beta.field is place.residue_field
    cache_key = (place, beta.key())
    hit = _CORES_CACHE.get(cache_key)
    if hit is not None:
        return hit
    pi = F.from_poly(place.pi)
    lift = _lift_map(place)
    gamma0 = MWElement(
        F,
        beta.n + 1,
        {(m, (pi,) + tuple(lift(u) for u in U)): c for (m, U), c in beta.terms.items()},
    )
    out = gamma0
    for y in support_places(gamma0):
        if y == place:
            continue
        assert y.degree < place.degree, "spurious place must have smaller degree"
        spur = residue(gamma0, y)
        if not spur.is_formally_zero():
            out = out - coresidue(spur, y)
    _CORES_CACHE[cache_key] = out
    return out


def _lift_map(place: Place):
    F = place.field
    ext = place.ext

    def lift(u):
        poly = ext.to_poly(u)
        assert poly.degree < place.degree
        lifted = F.from_poly(poly)
        assert not lifted.is_zero()
        return lifted

    return lift


def support_places(gamma: MWElement) -> list:
    """The finite places where some symbol entry is not a unit."""
    out = []
    for (_, U) in gamma.terms:
        for u in U:
            for p in places_of_support(u):
                if p.kind == "finite" and p not in out:
                    out.append(p)
    out.sort(key=lambda p: p.sort_key())
    return out


# --------------------------------------------------------------------------
# reconstruction
# --------------------------------------------------------------------------


def milnor_reconstruct(gamma: MWElement):
    """Split gamma into (constant part, finite residue data):

        gamma = restrict(c) + sum_y coresidue(d_y gamma, y).

    The constant part is read off by specializing the residue-free
    remainder at a rational place.  A place regular for the entries is
    preferred; since the remainder restricts from the base, the value does
    not depend on the place."""
    F = gamma.field
    parts = []
    delta = gamma
    for y in support_places(gamma):
        r = residue(gamma, y)
        if not r.is_formally_zero():
            parts.append((y, r))
            delta = delta - coresidue(r, y)
    z = _rational_place_for(F, [u for (_, U) in delta.terms for u in U])
    c = specialize(delta, z)
    return c, parts


def assemble(c: MWElement, parts, F: RationalFunctionField) -> MWElement:
    out = restrict(c, F)
    for y, r in parts:
        out = out + coresidue(r, y)
    return out


def _rational_place_for(F: RationalFunctionField, elems):
    from .fields.places import infinite_place, rational_place
    from .fields import FiniteField

    base = F.base
    if isinstance(base, FiniteField):
        consts = sorted(base.elements(), key=base.sort_key)
    else:
        consts = [base(n) for n in range(50)] + [base(-n) for n in range(1, 50)]
    for a in consts:
        p = rational_place(F, a)
        if all(p.valuation(u) == 0 for u in elems):
            return p
    p = infinite_place(F)
    if all(p.valuation(u) == 0 for u in elems):
        return p
    return rational_place(F, base(0))
