"""Grothendieck-Witt rings of the supported fields.

A `GWClass` is a virtual diagonal form: two tuples of units (`plus` and
`minus`) over a field, with an optional twist label.  No normal form is kept
on the representation; equality goes through the complete pair of invariants
(rank, Witt class of the difference), where "Witt class is zero" is decided
by a per-field backend:

  * GF(q), q odd: even rank and trivial signed discriminant
    (-1)^(r(r-1)/2) * prod(a_i);
  * Q: zero signature, trivial second residue at every odd prime (a Witt
    class over GF(p)), and even rank of the 2-adically odd part -- the
    residue decomposition of the Witt ring of Q;
  * Q(i): even rank, trivial discriminant (as a Gaussian square class), and
    trivial Hasse symbol at every odd Gaussian prime dividing an entry.
    There are no real embeddings and the dyadic symbol is forced by
    reciprocity, so this triple decides the class;
  * F(t): trivial second residue (unit part at odd-valuation entries) at
    every finite place of the support, then a specialization at a place
    regular for the entries: a rational place if one is free, otherwise a
    place of odd degree, where restriction of constants stays injective;
  * other number fields: only syntactic cancellation plus honest
    rank/discriminant obstructions; undetermined cases raise Unsupported
    rather than guess.

`scharlau_transfer` computes the trace-form transfer along a presented
separable extension by diagonalizing the Gram matrix of (x, y) -> Tr(u x y)
in the power basis.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import MwktError, TwistMismatch, Unsupported
from .fields import (
    ExtField,
    Extension,
    FiniteField,
    Poly,
    QQ,
    RationalFunctionField,
    finite_field,
)
from .fields.arith import legendre
from .fields.base import Field


class GWClass:
    __slots__ = ("field", "plus", "minus", "twist")

    def __init__(self, field: Field, plus=(), minus=(), twist=None):
        assert all(not a.is_zero() for a in plus), "diagonal entries must be units"
        assert all(not a.is_zero() for a in minus), "diagonal entries must be units"
        self.field = field
        self.plus = tuple(plus)
        self.minus = tuple(minus)
        self.twist = twist

    # --- constructors -------------------------------------------------------

    @classmethod
    def diagonal(cls, field, entries, twist=None):
        return cls(field, tuple(entries), (), twist)

    @classmethod
    def zero(cls, field, twist=None):
        return cls(field, (), (), twist)

    @classmethod
    def one(cls, field):
        return cls(field, (field.one(),), ())

    @classmethod
    def unit(cls, a, twist=None):
        """The rank-one form <a>."""
        return cls(a.field, (a,), (), twist)

    @classmethod
    def hyperbolic(cls, field):
        return cls(field, (field.one(), -field.one()), ())

    # --- ring structure ------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.plus) - len(self.minus)

    def _match(self, other):
        assert isinstance(other, GWClass) and self.field is other.field
        if self.twist != other.twist:
            raise TwistMismatch(f"{self.twist!r} vs {other.twist!r}")

    def __add__(self, other):
        self._match(other)
        return GWClass(self.field, self.plus + other.plus, self.minus + other.minus, self.twist)

    def __neg__(self):
        return GWClass(self.field, self.minus, self.plus, self.twist)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Only one factor may carry a twist; matching twists square away."""
        assert isinstance(other, GWClass) and self.field is other.field
        if self.twist is not None and other.twist is not None:
            twist = None if self.twist == other.twist else _twist_error(self, other)
        else:
            twist = self.twist if self.twist is not None else other.twist
        plus = tuple(a * b for a in self.plus for b in other.plus) + tuple(
            a * b for a in self.minus for b in other.minus
        )
        minus = tuple(a * b for a in self.plus for b in other.minus) + tuple(
            a * b for a in self.minus for b in other.plus
        )
        return GWClass(self.field, plus, minus, twist)

    def __rmul__(self, n: int):
        assert isinstance(n, int)
        if n < 0:
            return (-n) * (-self)
        out = GWClass.zero(self.field, self.twist)
        for _ in range(n):
            out = out + self
        return out

    def retwist(self, twist):
        """Relabel the twist; the caller asserts the trivializations agree."""
        return GWClass(self.field, self.plus, self.minus, twist)

    # --- equality ---------------------------------------------------------------

    def eq(self, other) -> bool:
        self._match(other)
        if self.rank != other.rank:
            return False
        diff = self - other
        entries = list(diff.plus) + [-a for a in diff.minus]
        return witt_zero(self.field, entries)

    def is_zero(self) -> bool:
        return self.eq(GWClass.zero(self.field, self.twist))

    def __repr__(self):
        fmt = self.field.format_element
        s = "<" + ",".join(fmt(a) for a in self.plus) + ">"
        if self.minus:
            s += " - <" + ",".join(fmt(a) for a in self.minus) + ">"
        if self.twist is not None:
            s += f" @{self.twist}"
        return s


def _twist_error(a, b):
    raise TwistMismatch(f"cannot multiply twists {a.twist!r} and {b.twist!r}")


def n_epsilon(field, n: int) -> GWClass:
    """n_eps = sum_{i=1}^{n} <(-1)^(i-1)>, extended to negative n by
    (-n)_eps = eps * n_eps with eps = -<-1>."""
    if n < 0:
        return epsilon(field) * n_epsilon(field, -n)
    entries = [field.one() if i % 2 == 0 else -field.one() for i in range(n)]
    return GWClass.diagonal(field, entries)


def epsilon(field) -> GWClass:
    return GWClass(field, (), (-field.one(),))


# --------------------------------------------------------------------------
# Witt-class zero tests
# --------------------------------------------------------------------------


def witt_zero(field, entries) -> bool:
    """Is the diagonal form with these entries hyperbolic (zero in W)?"""
    return witt_zero_pairs(field, [(a, 1) for a in entries])


def witt_zero_pairs(field, pairs) -> bool:
    """Witt-class test on a diagonal form given as (entry, count) pairs.

    Counts are plain multiplicities; transfers and eta-heavy symbol images
    produce them with sizes far beyond what a flat entry list could hold, so
    every backend works with exponents instead of expanded lists."""
    pairs = [(a, c) for a, c in pairs if not a.is_zero() and c]
    assert all(c > 0 for _, c in pairs), "counts must be positive"
    if sum(c for _, c in pairs) % 2:
        return False
    if not pairs:
        return True
    if isinstance(field, FiniteField):
        return _witt_zero_finite(field, pairs)
    if field is QQ:
        return _witt_zero_q(pairs)
    if isinstance(field, ExtField) and field.base is QQ:
        if field.minpoly.coeffs == tuple(QQ(n) for n in (1, 0, 1)):
            return _witt_zero_qi(field, pairs)
        return _witt_zero_numberfield(field, pairs)
    if isinstance(field, RationalFunctionField):
        return _witt_zero_ratfunc(field, pairs)
    raise Unsupported(f"no Witt-class decision procedure over {field!r}")


def _signed_disc_is_square(field, pairs) -> bool:
    r = sum(c for _, c in pairs)
    d = field.one()
    for a, c in pairs:
        if c % 2:
            d = d * a
    if (r * (r - 1) // 2) % 2:
        d = -d
    return field.is_square(d)


def _witt_zero_finite(field: FiniteField, pairs) -> bool:
    return sum(c for _, c in pairs) % 2 == 0 and _signed_disc_is_square(field, pairs)


def _witt_zero_q(pairs) -> bool:
    values = [(a.value, c) for a, c in pairs]
    if sum(c if v > 0 else -c for v, c in values) != 0:
        return False
    from .fields.arith import factorint

    support = set()
    factored = []
    for v, c in values:
        f = factorint(v.numerator) | {p: -e for p, e in factorint(v.denominator).items()}
        factored.append((f, c))
        support.update(p for p in f if p not in (-1, 2))
    # second residue at each odd prime: unit parts of odd-valuation entries
    for p in sorted(support):
        kappa = finite_field(p)
        residue_pairs = []
        for (v, c), (f, _) in zip(values, factored):
            e = f.get(p, 0)
            if e % 2:
                u = v / Fraction(p) ** e
                residue_pairs.append((kappa(u.numerator) * kappa(u.denominator).inverse(), c))
        if not _witt_zero_finite(kappa, residue_pairs):
            return False
    # 2-adic part: W(GF(2)) is rank mod 2
    odd_at_2 = sum(c * (f.get(2, 0) % 2) for f, c in factored)
    return odd_at_2 % 2 == 0


# --- Q(i) ------------------------------------------------------------------


def _qi_clear(a) -> tuple:
    """A Q(i) element as a Gaussian integer in the same square class."""
    from math import lcm

    x, y = a.coeffs[0].value, a.coeffs[1].value
    m = lcm(x.denominator, y.denominator)
    return (x.numerator * (m // x.denominator) * m, y.numerator * (m // y.denominator) * m)


def _qi_residue_map(pi):
    """The reduction map Z[i] -> kappa(pi) for an odd canonical Gaussian
    prime, as (field, callable)."""
    a, b = pi
    if b == 0:  # inert: kappa = GF(a^2)
        q = a
        kappa = finite_field(q, 2)
        lift = kappa.from_dlog((q * q - 1) // 4)  # a square root of -1
        assert lift * lift == kappa(-1)

        def red(g):
            return kappa(g[0]) + kappa(g[1]) * lift

        return kappa, red
    p = a * a + b * b
    kappa = finite_field(p)
    i_image = (-a * pow(b, -1, p)) % p

    def red(g):
        return kappa(g[0] + g[1] * i_image)

    return kappa, red


def _qi_unit_residue(fact, unit, pi, red):
    """Residue of the pi-unit part of a factored Gaussian integer."""
    out = red(unit)
    for q, e in fact.items():
        if q == pi:
            continue
        out = out * red(q) ** e
    return out


def _witt_zero_qi(field: ExtField, pairs) -> bool:
    from .fields.arith import g_factor, g_mul

    if sum(c for _, c in pairs) % 2:
        return False
    counts = [c for _, c in pairs]
    data = [g_factor(_qi_clear(a)) for a, _ in pairs]
    # discriminant: -1 is a square, so the plain product decides
    disc_odd = {}
    disc_unit = (1, 0)
    for (unit, fact), c in zip(data, counts):
        for _ in range(c % 4):  # Gaussian units have order dividing 4
            disc_unit = g_mul(disc_unit, unit)
        for q, e in fact.items():
            disc_odd[q] = (disc_odd.get(q, 0) + e * c) % 2
    if any(disc_odd.values()):
        return False
    if disc_unit not in ((1, 0), (-1, 0)):
        return False
    # Hasse symbol at each odd Gaussian prime of the support; with grouped
    # entries the pair (i, j) contributes c_i*c_j times and the within-group
    # pairs contribute c*(c-1)/2 times, everything mod 2
    support = sorted(
        {q for _, fact in data for q in fact if q != (1, 1)},
        key=lambda q: (q[0] * q[0] + q[1] * q[1], q),
    )
    for pi in support:
        kappa, red = _qi_residue_map(pi)
        symbol = 1
        vals = [fact.get(pi, 0) for _, fact in data]
        units = [_qi_unit_residue(fact, unit, pi, red) for unit, fact in data]
        for i in range(len(data)):
            for j in range(i, len(data)):
                alpha, beta = vals[i], vals[j]
                if alpha % 2 == 0 and beta % 2 == 0:
                    continue
                mult = counts[i] * (counts[i] - 1) // 2 if i == j else counts[i] * counts[j]
                if mult % 2 == 0:
                    continue
                t = kappa(-1) ** (alpha * beta) * units[i] ** beta * units[j] ** alpha
                if not kappa.is_square(t):
                    symbol = -symbol
        if symbol != 1:
            return False
    return True


# --- other number fields -----------------------------------------------------


def _witt_zero_numberfield(field: ExtField, pairs) -> bool:
    pairs = [[a, c] for a, c in pairs]
    # syntactic cancellation: <a> + <-a> drops out
    if field.is_square(-field.one()):
        for p in pairs:
            p[1] %= 2
    changed = True
    while changed:
        changed = False
        for i in range(len(pairs)):
            for j in range(i + 1, len(pairs)):
                if pairs[i][1] and pairs[j][1] and field.is_square(
                    -pairs[i][0] * pairs[j][0].inverse()
                ):
                    k = min(pairs[i][1], pairs[j][1])
                    pairs[i][1] -= k
                    pairs[j][1] -= k
                    changed = True
    pairs = [(a, c) for a, c in pairs if c]
    if not pairs:
        return True
    if sum(c for _, c in pairs) % 2:
        return False
    if not _signed_disc_is_square(field, pairs):
        return False
    raise Unsupported(f"Witt-class test over {field!r} is undecided for this form")


# --- rational function fields ---------------------------------------------------


def _witt_zero_ratfunc(field: RationalFunctionField, pairs) -> bool:
    from .fields.places import places_of_support

    support = []
    for a, _ in pairs:
        for p in places_of_support(a):
            if p.kind == "finite" and p not in support:
                support.append(p)
    support.sort(key=lambda p: p.sort_key())
    for place in support:
        residue_pairs = []
        for a, c in pairs:
            v, w = place.unit_part(a)
            if v % 2:
                residue_pairs.append((place.reduce(w), c))
        if not witt_zero_pairs(place.residue_field, residue_pairs):
            return False
    # all second residues vanish: specialize at a regular place
    place = _regular_specialization_place(field, [a for a, _ in pairs])
    reduced = [(place.reduce_unit(a), c) for a, c in pairs]
    return witt_zero_pairs(place.residue_field, reduced)


def _regular_specialization_place(field: RationalFunctionField, elems):
    """A place where every listed element is a unit: the first free rational
    place if any, else the first free place of odd degree (restriction of
    constants along an odd-degree residue field stays injective)."""
    from .fields.places import finite_place, infinite_place, rational_place

    def regular_at(p):
        return all(p.valuation(a) == 0 for a in elems if not a.is_zero())

    F = field.base
    if isinstance(F, FiniteField):
        consts = sorted(F.elements(), key=F.sort_key)
    else:
        consts = [F(n) for n in range(0, 50)] + [F(-n) for n in range(1, 50)]
    for c in consts:
        p = rational_place(field, c)
        if regular_at(p):
            return p
    p = infinite_place(field)
    if regular_at(p):
        return p
    if isinstance(F, FiniteField):
        from .fields.factor import is_irreducible

        for degree in (3, 5):
            for pi in _monic_polys(F, degree):
                if is_irreducible(pi):
                    p = finite_place(field, pi)
                    if regular_at(p):
                        return p
    raise Unsupported("no regular specialization place found")


def _monic_polys(F: FiniteField, degree: int):
    elems = sorted(F.elements(), key=F.sort_key)

    def rec(i, acc):
        if i == degree:
            yield Poly(F, acc + [F.one()])
            return
        for c in elems:
            yield from rec(i + 1, acc + [c])

    yield from rec(0, [])


# --------------------------------------------------------------------------
# trace-form transfer
# --------------------------------------------------------------------------


def symmetric_diagonalize(field, gram):
    """Diagonal entries of a congruent diagonal matrix; char != 2.

    Returns the nonzero pivots; raises if the matrix is singular (the trace
    form of an inseparable extension degenerates)."""
    n = len(gram)
    m = [list(row) for row in gram]
    pivots = []
    for k in range(n):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][i].is_zero()), None)
            if swap is not None:
                m[k], m[swap] = m[swap], m[k]
                for row in m:
                    row[k], row[swap] = row[swap], row[k]
            else:
                j = next((j for j in range(k + 1, n) if not m[k][j].is_zero()), None)
                if j is None:
                    raise MwktError("degenerate symmetric form")
                # all remaining diagonal entries vanish, so adding row and
                # column j puts 2*m[k][j] != 0 on the pivot
                for col in range(n):
                    m[k][col] = m[k][col] + m[j][col]
                for row in range(n):
                    m[row][k] = m[row][k] + m[row][j]
        pivot = m[k][k]
        pivots.append(pivot)
        inv = pivot.inverse()
        for i in range(k + 1, n):
            f = m[i][k] * inv
            if f.is_zero():
                continue
            for col in range(n):
                m[i][col] = m[i][col] - f * m[k][col]
            for row in range(n):
                m[row][i] = m[row][i] - f * m[row][k]
    assert all(m[i][j].is_zero() for i in range(n) for j in range(n) if i != j)
    return pivots


def scharlau_transfer(ext: Extension, g: GWClass) -> GWClass:
    """Transfer along F/E by the trace form: <u> goes to the class of the
    E-bilinear form (x, y) -> Tr_{F/E}(u x y)."""
    assert g.field is ext.field
    if not ext.separable:
        raise Unsupported("trace form is degenerate: inseparable extension")
    if g.twist is not None:
        raise TwistMismatch("transfer of twisted classes is not defined here")
    plus = []
    minus = []
    for bucket, out in ((g.plus, plus), (g.minus, minus)):
        for u in bucket:
            gram = _trace_gram(ext, u)
            out.extend(symmetric_diagonalize(ext.base, gram))
    return GWClass(ext.base, tuple(plus), tuple(minus))


def _trace_gram(ext: Extension, u):
    d = ext.degree
    powers = [ext.field.one()]
    for _ in range(2 * d - 2):
        powers.append(powers[-1] * ext.theta)
    traces = [ext.trace(u * p) for p in powers]
    return [[traces[i + j] for j in range(d)] for i in range(d)]


# --------------------------------------------------------------------------
# brute-force isometry oracle over finite fields
# --------------------------------------------------------------------------


def value_counts(field: FiniteField, entries):
    """How many vectors represent each value; a complete isometry invariant
    for nondegenerate diagonal forms over a finite field."""
    counts = {}

    def rec(i, acc):
        if i == len(entries):
            key = field.sort_key(acc)
            counts[key] = counts.get(key, 0) + 1
            return
        for x in field.elements():
            rec(i + 1, acc + entries[i] * x * x)

    rec(0, field.zero())
    return counts


def isometric_by_counts(field: FiniteField, e1, e2) -> bool:
    return len(e1) == len(e2) and value_counts(field, e1) == value_counts(field, e2)
