"""Finite Milnor-Witt correspondences between zero-dimensional etale schemes.

An etale scheme here is a finite disjoint union of spectra of finite
separable extensions of a base field.  A correspondence between two of them
is a matrix indexed by component pairs, where the (i, j) block is a formal
sum of Grothendieck-Witt classes over the points of F_i tensor_k F_j.

For a finite base GF(q) the points of GF(q^a) (x) GF(q^b) are classified
concretely: every point has residue field T = GF(q^lcm(a,b)), and a point
amounts to a pair of embeddings into T up to a common automorphism of T.
Normalizing the left embedding to the distinguished (discrete-log) one
leaves the right embedding twisted by a Frobenius power, well defined
modulo gcd(a, b).  Entries are therefore stored as {label r: GWClass over
T} with r in range(gcd(a, b)).

Composition follows the pull-multiply-push recipe: over each middle
component, present the two residue fields as algebras over it (the left one
along its twisted embedding), split their tensor product into points, pull
both entries in, multiply, weight by the epsilon-integer of the local
length (always 1 in the separable case), renormalize the resulting pair of
outer embeddings to a label, and transfer down to the residue field of the
outer point.  The transfer convention is the normalized one, so the
transpose of the graph of Spec GF(q^d) -> Spec GF(q) composes against the
point class to the trace form.

Over the rational base only blocks with a Spec-QQ side are representable
(those tensor products have a single point with residue field the other
factor); that is enough for the graph and transpose-graph correspondences
of a single extension and their composites.
"""

from __future__ import annotations

from math import gcd

from .errors import Unsupported
from .fields import QQ, Extension, FiniteField, finite_field
from .gw import GWClass, n_epsilon
from .fields.tensor import tensor_decompose
from .transfers import embedded_extension, finite_subextension, transfer_gw


class EtaleScheme:
    """A finite list of finite separable extensions of a fixed base.

    Over GF(q) the components are FiniteField objects containing the base
    (the embedding is the distinguished one).  Over QQ a component is
    either QQ itself or a presented Extension of QQ, whose field is taken
    as the component.
    """

    __slots__ = ("base", "components", "exts")

    def __init__(self, base, components):
        comps, exts = [], []
        for item in components:
            if isinstance(base, FiniteField):
                assert isinstance(item, FiniteField) and item.p == base.p
                assert item.k % base.k == 0
                comps.append(item)
                exts.append(None)
            else:
                assert base is QQ
                if item is QQ:
                    comps.append(QQ)
                    exts.append(None)
                elif isinstance(item, Extension):
                    assert item.base is QQ
                    comps.append(item.field)
                    exts.append(item)
                else:
                    raise Unsupported(
                        "components over QQ must be QQ or presented extensions of QQ"
                    )
        self.base = base
        self.components = tuple(comps)
        self.exts = tuple(exts)

    def __len__(self):
        return len(self.components)

    def rel_degree(self, i: int) -> int:
        F = self.components[i]
        if isinstance(self.base, FiniteField):
            return F.k // self.base.k
        return 1 if F is QQ else self.exts[i].degree

    def is_point(self) -> bool:
        """A single component equal to the base."""
        return len(self.components) == 1 and self.components[0] is self.base

    def __eq__(self, other):
        if not isinstance(other, EtaleScheme):
            return NotImplemented
        return self.base is other.base and all(
            a is b for a, b in zip(self.components, other.components)
        ) and len(self.components) == len(other.components)

    def __hash__(self):
        return hash((id(self.base),) + tuple(id(F) for F in self.components))

    def __repr__(self):
        names = " + ".join(repr(F) for F in self.components) or "(empty)"
        return f"EtaleScheme({names})"


def point_scheme(base) -> EtaleScheme:
    return EtaleScheme(base, [base])


def _pair_data(X: EtaleScheme, i: int, Y: EtaleScheme, j: int):
    """(residue field T, number of labels) for the points of F_i (x) F_j."""
    Fi, Fj = X.components[i], Y.components[j]
    base = X.base
    if isinstance(base, FiniteField):
        a, b = X.rel_degree(i), Y.rel_degree(j)
        l = a * b // gcd(a, b)
        T = finite_field(base.p, base.k * l)
        return T, gcd(a, b)
    if Fi is QQ:
        return Fj, 1
    if Fj is QQ:
        return Fi, 1
    raise Unsupported("tensor blocks over QQ need a Spec-QQ side")


class MWCor:
    """A correspondence matrix.  entries[(i, j)] = {label: GWClass over the
    pair residue field}; missing keys are zero."""

    __slots__ = ("source", "target", "entries")

    def __init__(self, source: EtaleScheme, target: EtaleScheme, entries):
        assert source.base is target.base
        clean = {}
        for (i, j), row in entries.items():
            assert 0 <= i < len(source) and 0 <= j < len(target)
            T, labels = _pair_data(source, i, target, j)
            kept = {}
            for r, cls in row.items():
                assert isinstance(r, int) and 0 <= r < labels
                assert isinstance(cls, GWClass) and cls.field is T
                assert cls.twist is None, "twists are trivialized componentwise"
                if cls.plus or cls.minus:
                    kept[r] = cls
            if kept:
                clean[(i, j)] = kept
        self.source = source
        self.target = target
        self.entries = clean

    def entry(self, i: int, j: int, r: int) -> GWClass:
        T, labels = _pair_data(self.source, i, self.target, j)
        assert 0 <= r < labels
        got = self.entries.get((i, j), {}).get(r)
        return got if got is not None else GWClass.zero(T)

    def __add__(self, other):
        assert isinstance(other, MWCor)
        assert self.source == other.source and self.target == other.target
        keys = set(self.entries) | set(other.entries)
        out = {}
        for key in keys:
            row = dict(self.entries.get(key, {}))
            for r, cls in other.entries.get(key, {}).items():
                row[r] = row[r] + cls if r in row else cls
            out[key] = row
        return MWCor(self.source, self.target, out)

    def __neg__(self):
        return MWCor(
            self.source,
            self.target,
            {key: {r: -cls for r, cls in row.items()} for key, row in self.entries.items()},
        )

    def __sub__(self, other):
        return self + (-other)

    def eq(self, other) -> bool:
        assert isinstance(other, MWCor)
        if not (self.source == other.source and self.target == other.target):
            return False
        keys = set(self.entries) | set(other.entries)
        for i, j in keys:
            mine = self.entries.get((i, j), {})
            theirs = other.entries.get((i, j), {})
            for r in set(mine) | set(theirs):
                if not self.entry(i, j, r).eq(other.entry(i, j, r)):
                    return False
        return True

    def is_zero(self) -> bool:
        return all(
            self.entry(i, j, r).is_zero()
            for (i, j), row in self.entries.items()
            for r in row
        )

    def __repr__(self):
        if not self.entries:
            return "MWCor(0)"
        cells = []
        for (i, j), row in sorted(self.entries.items()):
            for r, cls in sorted(row.items()):
                cells.append(f"({i},{j})@{r}: {cls!r}")
        return "MWCor{ " + "; ".join(cells) + " }"


def identity(X: EtaleScheme) -> MWCor:
    """The diagonal correspondence, entry <1> at the label-0 point of each
    F_i (x) F_i."""
    entries = {}
    for i, F in enumerate(X.components):
        T, _ = _pair_data(X, i, X, i)
        entries[(i, i)] = {0: GWClass.one(T)}
    return MWCor(X, X, entries)


def _gen_into(F: FiniteField, T: FiniteField):
    """Image of the distinguished generator of F under the distinguished
    embedding into T (T may be F itself)."""
    return F.gen() if T is F else T.embed(F.gen())


def _gw_map(cls: GWClass, field, fn) -> GWClass:
    return GWClass(field, tuple(fn(a) for a in cls.plus), tuple(fn(a) for a in cls.minus))


def _gw_frob(cls: GWClass, e: int) -> GWClass:
    if e == 1:
        return cls
    return GWClass(
        cls.field, tuple(a**e for a in cls.plus), tuple(a**e for a in cls.minus)
    )


def _classify(base: FiniteField, Fi, Fk, x, y, R):
    """Normalize the pair of embeddings recorded by generator images x (of
    F_i) and y (of F_k) in R: find the Frobenius power s with x^(q^s) equal
    to the distinguished image, then read the label of the twisted right
    embedding.  Returns (q^s, label)."""
    q = base.q
    target_x = _gen_into(Fi, R)
    s, cur = 0, x
    m = R.k // base.k
    while cur != target_x:
        cur = cur**q
        s += 1
        assert s < m, "left embedding is not a Frobenius twist of the distinguished one"
    e = pow(q, s)
    y = y**e
    target_y = _gen_into(Fk, R)
    r3, cur = 0, target_y
    bk = Fk.k // base.k
    while cur != y:
        cur = cur**q
        r3 += 1
        assert r3 < bk, "right embedding does not match any label"
    ai = Fi.k // base.k
    return e, r3 % gcd(ai, bk)


def _pieces_finite(base, Fi, Fj, Fk, r1, g1, r2, g2):
    """Contributions of one pair of entries to the composite: a list of
    (label, GWClass over the (i,k) pair field)."""
    q = base.q
    U, S = g1.field, g2.field
    aj = Fj.k // base.k

    # Present the middle join U (x)_{F_j} S.  U carries the r1-twisted
    # embedding of F_j, S the distinguished one; a point is a residue field
    # R with maps phi: U -> R, psi: S -> R agreeing on F_j through those.
    if U.k == Fj.k:
        # U is F_j itself; untwist by r1 when passing to S.
        unshift = pow(q, (aj - r1) % aj)

        def phi(u, _e=unshift):
            u = u**_e
            return u if S is U else S.embed(u)

        components = [(S, 1, phi, lambda s: s)]
    elif S.k == Fj.k:
        # S is F_j; its distinguished copy inside U is the r1-twisted one.
        shift = pow(q, r1)
        components = [(U, 1, lambda u: u, lambda s, _e=shift: U.embed(s) ** _e)]
    else:
        gen_image = U.embed(Fj.gen()) ** pow(q, r1)
        ext_u = embedded_extension(Fj, U, gen_image)
        ext_s = finite_subextension(Fj, S)
        dec = tensor_decompose(ext_u, ext_s)
        components = [(c.ext.field, c.e, c.phi, c.psi) for c in dec.components]

    out = []
    for R, e, phi, psi in components:
        prod = _gw_map(g1, R, phi) * _gw_map(g2, R, psi)
        if e != 1:
            prod = n_epsilon(R, e) * prod
        x = phi(_gen_into(Fi, U))
        y = psi(_gen_into(Fk, S) ** pow(q, r2))
        frob, r3 = _classify(base, Fi, Fk, x, y, R)
        prod = _gw_frob(prod, frob)
        ai, ck = Fi.k // base.k, Fk.k // base.k
        l = ai * ck // gcd(ai, ck)
        T = finite_field(base.p, base.k * l)
        if R is not T:
            prod = transfer_gw(finite_subextension(T, R), prod)
        out.append((r3, prod))
    return out


def _pieces_q(Fi, ei, Fj, ej, Fk, ek, g1, g2):
    """The rational-base composition, limited to blocks with a Spec-QQ
    side.  Exactly the shapes where the middle join has a single point."""
    if Fj is QQ:
        if Fi is QQ and Fk is QQ:
            return [(0, g1 * g2)]
        if Fi is QQ:
            return [(0, _gw_map(g1, Fk, ek.embed) * g2)]
        if Fk is QQ:
            return [(0, g1 * _gw_map(g2, Fi, ei.embed))]
        raise Unsupported("tensor blocks over QQ need a Spec-QQ side")
    if Fi is QQ and Fk is QQ:
        return [(0, transfer_gw(ej, g1 * g2))]
    raise Unsupported("composition over QQ needs Spec-QQ outer components")


def compose(beta: MWCor, alpha: MWCor) -> MWCor:
    """alpha after beta: pull both to the middle join, multiply, weight by
    the epsilon-length, push down to the outer pair."""
    assert beta.target == alpha.source, "composition shapes do not match"
    X, Y, Z = beta.source, beta.target, alpha.target
    finite = isinstance(X.base, FiniteField)
    out = {}
    for (i, j), row in beta.entries.items():
        for (j2, k), col in alpha.entries.items():
            if j2 != j:
                continue
            for r1, g1 in row.items():
                for r2, g2 in col.items():
                    if finite:
                        pieces = _pieces_finite(
                            X.base, X.components[i], Y.components[j],
                            Z.components[k], r1, g1, r2, g2,
                        )
                    else:
                        pieces = _pieces_q(
                            X.components[i], X.exts[i], Y.components[j],
                            Y.exts[j], Z.components[k], Z.exts[k], g1, g2,
                        )
                    acc = out.setdefault((i, k), {})
                    for r3, piece in pieces:
                        acc[r3] = acc[r3] + piece if r3 in acc else piece
    return MWCor(X, Z, out)


def transpose(alpha: MWCor) -> MWCor:
    """Swap source and target.  Over a finite base the label of a point
    flips sign and the entry is moved by the Frobenius power that
    renormalizes the swapped pair of embeddings."""
    X, Y = alpha.source, alpha.target
    if not isinstance(X.base, FiniteField):
        return MWCor(Y, X, {(j, i): dict(row) for (i, j), row in alpha.entries.items()})
    q = X.base.q
    out = {}
    for (i, j), row in alpha.entries.items():
        a, b = X.rel_degree(i), Y.rel_degree(j)
        g = gcd(a, b)
        moved = {}
        for r, cls in row.items():
            moved[(-r) % g] = _gw_frob(cls, pow(q, (b - r) % b))
        out[(j, i)] = moved
    return MWCor(Y, X, out)


def to_gw(alpha: MWCor):
    """The identification of correspondences in or out of Spec k with
    tuples of GW classes, one per component of the other scheme."""
    if alpha.source.is_point():
        Y = alpha.target
        return [alpha.entry(0, j, 0) for j in range(len(Y))]
    if alpha.target.is_point():
        X = alpha.source
        return [alpha.entry(i, 0, 0) for i in range(len(X))]
    raise Unsupported("to_gw needs Spec k on one side")


def from_gw(X: EtaleScheme, classes, into: bool = False) -> MWCor:
    """Inverse of `to_gw`: build Cor(Spec k, X) from one GW class per
    component (or Cor(X, Spec k) when `into` is set)."""
    pt = point_scheme(X.base)
    assert len(classes) == len(X)
    entries = {}
    for j, cls in enumerate(classes):
        T, _ = _pair_data(pt, 0, X, j)
        assert cls.field is T
        if cls.plus or cls.minus:
            entries[(0, j) if not into else (j, 0)] = {0: cls}
    return MWCor(pt, X, entries) if not into else MWCor(X, pt, entries)
