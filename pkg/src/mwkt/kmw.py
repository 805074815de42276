"""Milnor-Witt symbol algebra.

An `MWElement` of degree n over F is an integer combination of generators
eta^m [u_1, ..., u_r] with r - m = n and the u_i units of F.  The terms are
kept as a dict mapping (m, entry tuple) to an integer coefficient; no
rewriting happens on construction beyond dropping entries equal to 1 (the
generator [1] vanishes) and zero coefficients.

Equality is decided on the difference through the pair of realizations that
jointly separate classes in every degree:

  * the Milnor image (send eta to 0): terms with m = 0 survive as Milnor
    symbols, tested by a per-field procedure in `milnor_zero`;
  * the Witt image (eta becomes invertible): eta^m [u_1 .. u_r] lands on
    the Pfister-style product (<u_1> - 1)...(<u_r> - 1), a Witt class,
    tested by `gw.witt_zero`.

Degree 0 reproduces rank + Witt class, matching `to_gw`; in negative
degrees the Milnor image is identically zero and the Witt image decides.

The per-field Milnor backends: exact in degrees 0 and 1 over any field;
finite fields have no symbols in degree >= 2; over Q degree 2 is decided by
tame symbols at odd primes plus the dyadic Hilbert symbol, degree >= 3 by
the all-entries-negative bit; over Q(i) degree 2 is decided by tame symbols
at odd Gaussian primes and degree >= 3 vanishes; over F(t) residues at the
finite places of the support plus one specialization reduce to F.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import TwistMismatch, Unsupported
from .fields import ExtField, FiniteField, QQ, RationalFunctionField, finite_field
from .fields.arith import factorint, g_factor, hilbert_symbol_2
from .gw import GWClass, _qi_residue_map, witt_zero_pairs


class MWElement:
    __slots__ = ("field", "n", "twist", "terms")

    def __init__(self, field, n: int, terms=None, twist=None):
        self.field = field
        self.n = n
        self.twist = twist
        neg_one = -field.one()
        clean = {}
        for (m, entries), c in (terms or {}).items():
            assert m >= 0 and len(entries) - m == n
            if c == 0 or any(u.is_one() for u in entries):
                continue
            assert all(not u.is_zero() for u in entries), "symbol entries must be units"
            # Under eta^2 the entries commute freely (eta^2 eps = eta^2), a
            # repeated entry turns into -1 ([u][u] = [u][-1]) and a -1 entry
            # strips off (eta^2 [-1] = -2 eta).  Iterating keeps the eta
            # exponent small, which the Witt-image expansion needs.
            if m >= 2:
                entries = list(entries)
                while m >= 2:
                    try:
                        i = entries.index(neg_one)
                    except ValueError:
                        seen = set()
                        dup = None
                        for j, u in enumerate(entries):
                            if u in seen:
                                dup = j
                                break
                            seen.add(u)
                        if dup is None:
                            break
                        entries[dup] = neg_one
                        continue
                    del entries[i]
                    m -= 1
                    c = -2 * c
                if m >= 2:
                    entries.sort(key=field.sort_key)
            key = (m, tuple(entries))
            clean[key] = clean.get(key, 0) + c
            if clean[key] == 0:
                del clean[key]
        self.terms = clean

    # --- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field, n: int, twist=None):
        return cls(field, n, {}, twist)

    @classmethod
    def symbol(cls, field, entries, m: int = 0, coeff: int = 1, twist=None):
        entries = tuple(entries)
        return cls(field, len(entries) - m, {(m, entries): coeff}, twist)

    @classmethod
    def one(cls, field):
        """The empty symbol: the unit of K^MW_0."""
        return cls(field, 0, {(0, ()): 1})

    @classmethod
    def unit_class(cls, a, twist=None):
        """<a> = 1 + eta [a] in degree 0."""
        f = a.field
        return cls(f, 0, {(0, ()): 1, (1, (a,)): 1}, twist)

    @classmethod
    def from_gw(cls, g: GWClass):
        out = cls.zero(g.field, 0, g.twist)
        for a in g.plus:
            out = out + cls.unit_class(a, g.twist)
        for a in g.minus:
            out = out - cls.unit_class(a, g.twist)
        return out

    # --- additive structure ---------------------------------------------------

    def _match(self, other):
        assert isinstance(other, MWElement) and self.field is other.field
        assert self.n == other.n, f"degrees {self.n} and {other.n} differ"
        if self.twist != other.twist:
            raise TwistMismatch(f"{self.twist!r} vs {other.twist!r}")

    def __add__(self, other):
        self._match(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return MWElement(self.field, self.n, terms, self.twist)

    def __neg__(self):
        return MWElement(self.field, self.n, {k: -c for k, c in self.terms.items()}, self.twist)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c: int):
        assert isinstance(c, int)
        return MWElement(self.field, self.n, {k: c * v for k, v in self.terms.items()}, self.twist)

    def is_formally_zero(self) -> bool:
        return not self.terms

    # --- multiplicative structure ---------------------------------------------

    def __mul__(self, other):
        assert isinstance(other, MWElement) and self.field is other.field
        if self.twist is not None and other.twist is not None:
            if self.twist != other.twist:
                raise TwistMismatch(f"{self.twist!r} * {other.twist!r}")
            twist = None
        else:
            twist = self.twist if self.twist is not None else other.twist
        terms = {}
        for (m1, u1), c1 in self.terms.items():
            for (m2, u2), c2 in other.terms.items():
                key = (m1 + m2, u1 + u2)
                terms[key] = terms.get(key, 0) + c1 * c2
        return MWElement(self.field, self.n + other.n, terms, twist)

    def eta(self, k: int = 1):
        """Multiply by eta^k; the degree drops by k."""
        assert k >= 0
        return MWElement(
            self.field,
            self.n - k,
            {(m + k, u): c for (m, u), c in self.terms.items()},
            self.twist,
        )

    def act(self, g: GWClass):
        """Multiply by a GW class (degree-0 action)."""
        assert g.field is self.field
        return MWElement.from_gw(g) * self

    def retwist(self, twist):
        return MWElement(self.field, self.n, dict(self.terms), twist)

    # --- realizations ----------------------------------------------------------

    def milnor_terms(self) -> dict:
        """The eta -> 0 image: Milnor symbols with coefficients."""
        return {u: c for (m, u), c in self.terms.items() if m == 0}

    def witt_entries(self) -> list:
        """The Witt image as (diagonal entry, count) pairs.

        eta^m [u_1 .. u_r] becomes prod_i (<u_i> - 1); the expansion over
        subsets yields signed one-dimensional forms whose multiplicities are
        kept as counts (symbol coefficients grow too large for flat lists).
        Since <a> + <-a> is hyperbolic, each {a, -a} orbit collapses onto
        one representative and only a positive net count survives."""
        field = self.field
        counts = {}
        for (m, us), c in self.terms.items():
            expansion = {field.one(): c}
            for u in us:
                nxt = {}
                for prod, k in expansion.items():
                    pu = prod * u
                    nxt[pu] = nxt.get(pu, 0) + k
                    nxt[prod] = nxt.get(prod, 0) - k
                expansion = nxt
            for a, k in expansion.items():
                counts[a] = counts.get(a, 0) + k
        sk = field.sort_key
        folded = {}
        for a, k in counts.items():
            if k == 0:
                continue
            b = -a
            if sk(b) < sk(a):
                a, k = b, -k
            folded[a] = folded.get(a, 0) + k
        return [(a, k) if k > 0 else (-a, -k) for a, k in folded.items() if k != 0]

    def to_gw(self) -> GWClass:
        """The canonical isomorphism in degree 0."""
        assert self.n == 0, "to_gw needs degree 0"
        plus, minus = [], []
        one = self.field.one()
        for (m, us), c in self.terms.items():
            expansion = [(1, one)]
            for u in us:
                expansion = [
                    (s * t, p * q)
                    for s, p in expansion
                    for t, q in ((1, u), (-1, one))
                ]
            for sign, prod in expansion:
                bucket = plus if sign * c > 0 else minus
                bucket.extend([prod] * abs(sign * c))
        return GWClass(self.field, tuple(plus), tuple(minus), self.twist)

    # --- equality ---------------------------------------------------------------

    def eq(self, other) -> bool:
        self._match(other)
        diff = self - other
        if diff.is_formally_zero():
            return True
        if not milnor_zero(diff.field, diff.milnor_terms(), diff.n):
            return False
        return witt_zero_pairs(diff.field, diff.witt_entries())

    def is_zero(self) -> bool:
        return self.eq(MWElement.zero(self.field, self.n, self.twist))

    def key(self):
        """A hashable canonical key of the representation (not the class)."""
        sk = self.field.sort_key
        items = sorted(
            ((m, tuple(sk(u) for u in us), c) for (m, us), c in self.terms.items()),
        )
        return (self.n, self.twist, tuple(items))

    def __repr__(self):
        if not self.terms:
            return f"0 (deg {self.n})" + (f" @{self.twist}" if self.twist else "")
        fmt = self.field.format_element
        parts = []
        for (m, us), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0], len(kv[0][1]))):
            s = ""
            if c != 1:
                s += f"{c}*"
            if m:
                s += f"eta^{m}*" if m > 1 else "eta*"
            s += "[" + ",".join(fmt(u) for u in us) + "]"
            parts.append(s)
        out = " + ".join(parts).replace("+ -", "- ")
        if self.twist is not None:
            out += f" @{self.twist}"
        return out


def map_symbols(beta: MWElement, field, fn) -> MWElement:
    """Apply a field homomorphism entrywise: eta^m [u_1..u_r] -> eta^m [fn(u_1)..].

    Sound for ring maps between fields (units go to units, the defining
    relations are equations between symbol entries).  The caller supplies the
    target field explicitly because `fn` alone does not know it.
    """
    out = {}
    for (m, us), c in beta.terms.items():
        key = (m, tuple(fn(u) for u in us))
        out[key] = out.get(key, 0) + c
    return MWElement(field, beta.n, out, beta.twist)


# --------------------------------------------------------------------------
# Milnor K-theory zero tests
# --------------------------------------------------------------------------


def milnor_zero(field, terms: dict, n: int) -> bool:
    """Does this combination of Milnor symbols vanish in K^M_n?"""
    terms = {u: c for u, c in terms.items() if c != 0}
    if not terms:
        return True
    if n == 0:
        return sum(terms.values()) == 0
    if n == 1:
        prod = field.one()
        for (u,), c in terms.items():
            prod = prod * u**c
        return prod.is_one()
    if isinstance(field, FiniteField):
        return True
    if field is QQ:
        return _milnor_zero_q(terms, n)
    if isinstance(field, ExtField) and field.base is QQ:
        if field.minpoly.coeffs == tuple(QQ(k) for k in (1, 0, 1)):
            return _milnor_zero_qi(field, terms, n)
        raise Unsupported(f"Milnor zero test over {field!r} in degree {n}")
    if isinstance(field, RationalFunctionField):
        return _milnor_zero_ratfunc(field, terms, n)
    raise Unsupported(f"Milnor zero test over {field!r} in degree {n}")


def _milnor_zero_q(terms: dict, n: int) -> bool:
    if n >= 3:
        # K^M_n(Q) for n >= 3 is Z/2 on {-1,...,-1}
        bit = sum(c for u, c in terms.items() if all(x.value < 0 for x in u))
        return bit % 2 == 0
    # n = 2: dyadic Hilbert symbol and tame symbols at odd primes
    dyadic = 1
    for (u, v), c in terms.items():
        if c % 2 and hilbert_symbol_2(u.value, v.value) == -1:
            dyadic = -dyadic
    if dyadic != 1:
        return False
    support = set()
    vals = {}
    for (u, v), _ in terms.items():
        for x in (u, v):
            if id(x) not in vals:
                f = factorint(x.value.numerator) | {
                    p: -e for p, e in factorint(x.value.denominator).items()
                }
                vals[id(x)] = f
                support.update(p for p in f if p not in (-1, 2))
    for p in sorted(support):
        kappa = finite_field(p)
        acc = kappa.one()
        for (u, v), c in terms.items():
            alpha = vals[id(u)].get(p, 0)
            beta = vals[id(v)].get(p, 0)
            if alpha == 0 and beta == 0:
                continue
            # the tame value (-1)^(ab) u^b v^-a is a p-unit by construction
            t = Fraction(-1) ** (alpha * beta) * u.value**beta * v.value**-alpha
            r = kappa(t.numerator) * kappa(t.denominator).inverse()
            acc = acc * r**c
        if not acc.is_one():
            return False
    return True


def _qi_val_unit_residue(a, pi, red):
    """(valuation, residue of the unit part) of a Q(i) element at an odd
    Gaussian prime, treating numerator and denominator exactly."""
    from math import lcm

    x, y = a.coeffs[0].value, a.coeffs[1].value
    den = lcm(x.denominator, y.denominator)
    num = (x.numerator * (den // x.denominator), y.numerator * (den // y.denominator))
    vu, fu = g_factor(num)
    vd, fd = g_factor((den, 0))
    val = fu.get(pi, 0) - fd.get(pi, 0)
    res = red(vu)
    for q, e in fu.items():
        if q != pi:
            res = res * red(q) ** e
    inv = red(vd)
    for q, e in fd.items():
        if q != pi:
            inv = inv * red(q) ** e
    return val, res * inv.inverse()


def _milnor_zero_qi(field, terms: dict, n: int) -> bool:
    if n >= 3:
        return True
    # n = 2: K_2 of the Gaussian integers is trivial, so the tame symbols
    # at odd Gaussian primes decide; the dyadic residue field is GF(2).
    from math import lcm

    support = set()
    for us in terms:
        for x in us:
            xx, yy = x.coeffs[0].value, x.coeffs[1].value
            den = lcm(xx.denominator, yy.denominator)
            num = (xx.numerator * (den // xx.denominator), yy.numerator * (den // yy.denominator))
            for g in (num, (den, 0)):
                _, f = g_factor(g)
                support.update(q for q in f if q != (1, 1))
    for pi in sorted(support, key=lambda q: (q[0] * q[0] + q[1] * q[1], q)):
        kappa, red = _qi_residue_map(pi)
        acc = kappa.one()
        for (u, v), c in terms.items():
            alpha, ru = _qi_val_unit_residue(u, pi, red)
            beta, rv = _qi_val_unit_residue(v, pi, red)
            if alpha == 0 and beta == 0:
                continue
            t = kappa(-1) ** (alpha * beta) * ru**beta * rv**-alpha
            acc = acc * t**c
        if not acc.is_one():
            return False
    return True


def _milnor_zero_ratfunc(field: RationalFunctionField, terms: dict, n: int) -> bool:
    from .fields.places import places_of_support

    support = []
    for us in terms:
        for u in us:
            for p in places_of_support(u):
                if p.kind == "finite" and p not in support:
                    support.append(p)
    support.sort(key=lambda p: p.sort_key())
    for place in support:
        res = milnor_residue(terms, place)
        if not milnor_zero(place.residue_field, res, n - 1):
            return False
    from .gw import _regular_specialization_place

    units = [u for us in terms for u in us]
    place = _regular_specialization_place(field, units)
    reduced = {}
    for us, c in terms.items():
        key = tuple(place.reduce_unit(u) for u in us)
        if any(x.is_one() for x in key):
            continue
        reduced[key] = reduced.get(key, 0) + c
    return milnor_zero(place.residue_field, reduced, n)


def milnor_residue(terms: dict, place) -> dict:
    """Residue of a combination of Milnor symbols at a finite place,
    with the uniformizer-first sign convention: d{pi, u} = {ubar} and
    d{u, pi} = -{ubar}."""
    out = {}

    def emit(weight, entries):
        if any(x.is_one() for x in entries):
            return
        key = tuple(entries)
        out[key] = out.get(key, 0) + weight
        if out[key] == 0:
            del out[key]

    def reduce_term(weight, entries):
        # entries: None marks the uniformizer, other slots are units at the place
        pis = [i for i, x in enumerate(entries) if x is None]
        if not pis:
            return
        if len(pis) == 1:
            i = pis[0]
            if i % 2:
                weight = -weight
            emit(weight, [place.reduce(x) for j, x in enumerate(entries) if j != i])
            return
        # bring the second marker next to the first: each adjacent swap negates
        i, j = pis[0], pis[1]
        weight = weight * (-1) ** (j - i - 1)
        rest = list(entries)
        del rest[j]
        rest.insert(i + 1, -place.field.one())
        # {pi, pi} = -{pi, -1} with this engine's epsilon convention
        reduce_term(-weight, rest)

    for us, c in terms.items():
        split = [place.unit_part(u) for u in us]
        # multilinear expansion: each entry contributes v * {pi} + {w}
        stack = [(c, [])]
        for v, w in split:
            nxt = []
            for weight, acc in stack:
                if v != 0:
                    nxt.append((weight * v, acc + [None]))
                if not w.is_one():
                    nxt.append((weight, acc + [w]))
            stack = nxt
        for weight, acc in stack:
            if weight != 0:
                reduce_term(weight, acc)
    return out
