"""Seeded verification suites over a field catalog.

Every check binds one identity of the calculus to an executable test:
residue rules, transfer compatibilities, base change, the reconstruction
of K^MW over a rational function field, complex-level commutations, and
the correspondence category laws.  A run executes the selected checks over
a catalog of fields, draws its samples from one seeded generator per
check, and collects one record each: id, anchor (the identity, stated),
status, witness, and wall time.

Statuses: "pass", "fail" (an identity the engine is supposed to satisfy
does not hold; the record carries a witness), and "finding".  A finding is
reserved for the presentation-independence probe: that independence is
conjectural, so a violation is reported as a discovery rather than an
engine failure, and drives a distinct exit code.

Determinism: given the same catalog, seed, sample count, and mutation, the
timing-free serialization `Report.to_jsonl(include_timing=False)` is
byte-identical across runs.  Timings are measured and carried in the
records but are inherently noisy, so they are excluded from that contract.

Mutations deliberately miscalibrate one convention so downstream tests can
confirm the checks would notice: "at-infinity" reverses the orientation of
the residue at the infinite place on the route under test (independent
oracles and reference routes keep the calibrated sign, which is how the
checks pin it), "eps-multiplicity" replaces epsilon-integer component
weights by plain integers in base change, and "probe-skew" applies the
orientation reversal to one route of the independence probe.  A global
flip of the uniformizer at infinity would be the wrong knob here: the unit
it introduces enters squared through every even-degree stage, so the
catalog pairs cannot see it.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import MwktError, Unsupported
from .fields import (
    QQ,
    Poly,
    RationalFunctionField,
    factor_poly,
    finite_field,
    make_extension,
    rational_function_field,
)
from .fields.places import finite_place, infinite_place, places_of_support
from .gw import GWClass, scharlau_transfer
from .kmw import MWElement, map_symbols
from . import mw_corr
from . import rost_schmid as rs
from .residues import assemble, milnor_reconstruct, residue, restrict, specialize
from .transfers import (
    finite_subextension,
    kernel_kill_check,
    res_ext,
    res_gw,
    residue_field_transfer,
    residue_transfer_sides,
    strong_r1c_sides,
    tower_transfer,
    transfer,
)

SCHEMA_VERSION = 1

MUTATIONS = ("at-infinity", "eps-multiplicity", "probe-skew")
THEORIES = ("kmw", "km", "w")


@dataclass
class CheckSpec:
    """One planned check: identifier, theory filter, catalog, samples, seed."""

    check: str
    theory: str = "kmw"
    samples: int | None = None
    seed: int = 0


@dataclass
class CheckResult:
    id: str
    anchor: str
    status: str
    witness: str | None
    millis: int

    def record(self, include_timing: bool = True) -> dict:
        rec = {
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status,
            "witness": self.witness,
        }
        if include_timing:
            rec["millis"] = self.millis
        return rec


@dataclass
class Report:
    results: list = dc_field(default_factory=list)
    schema: int = SCHEMA_VERSION

    def sorted_results(self):
        return sorted(self.results, key=lambda r: r.id)

    def ok(self) -> bool:
        return all(r.status == "pass" for r in self.results)

    def has_finding(self) -> bool:
        return any(r.status == "finding" for r in self.results)

    def has_failure(self) -> bool:
        return any(r.status == "fail" for r in self.results)

    def exit_code(self) -> int:
        if self.has_failure():
            return 2
        if self.has_finding():
            return 3
        return 0

    def to_jsonl(self, include_timing: bool = True) -> str:
        lines = [
            json.dumps(r.record(include_timing), sort_keys=True, separators=(",", ":"))
            for r in self.sorted_results()
        ]
        return "\n".join(lines) + ("\n" if lines else "")


# --------------------------------------------------------------------------
# catalog and sampling
# --------------------------------------------------------------------------


def default_catalog() -> dict:
    k3 = finite_field(3)
    return {
        "GF(3)": k3,
        "GF(5)": finite_field(5),
        "GF(9)": finite_field(3, 2),
        "GF(3)(t)": rational_function_field(k3),
        "Q": QQ,
        "Q(i)": _qi_ext().field,
    }


def _qi_ext():
    return make_extension(QQ, Poly(QQ, [QQ(1), QQ(0), QQ(1)]))


class _Ctx:
    def __init__(self, catalog, seed, samples, mutate, theory):
        self.catalog = catalog
        self.seed = seed
        self.samples = samples
        self.mutate = mutate
        self.theory = theory

    def rng(self, check_id):
        return random.Random(f"{self.seed}/{check_id}")

    def has(self, *names):
        return all(n in self.catalog for n in names)

    def count(self, default):
        return default if self.samples is None else self.samples

    def twist(self, x):
        """Reverse the residue-at-infinity orientation on the tested route."""
        return -x if self.mutate == "at-infinity" else x

    def eps_mult(self) -> bool:
        return self.mutate != "eps-multiplicity"


def _rand_unit(F, rng):
    while True:
        a = F.random_element(rng)
        if not a.is_zero():
            return a


def _rand_ff(E: RationalFunctionField, rng, dmax=2):
    F = E.base
    while True:
        num = Poly(F, [F.random_element(rng) for _ in range(rng.randint(1, dmax + 1))])
        den = Poly(F, [F.random_element(rng) for _ in range(rng.randint(1, dmax + 1))])
        if num.is_zero() or den.is_zero():
            continue
        return E.from_fraction(num, den)


def _unit_of(field, rng):
    """Random nonzero element, kept small over the rationals: Witt tests
    over Q factor discriminants, so huge numerators mean huge primes."""
    if isinstance(field, RationalFunctionField):
        return _rand_ff(field, rng)
    if field is QQ:
        while True:
            c = QQ(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
            if not c.is_zero():
                return c
    from .fields import ExtField

    if isinstance(field, ExtField):
        while True:
            z = field.zero()
            gen_pow = field.one()
            for _ in range(field.degree):
                z = z + field.scalar(QQ(rng.randint(-2, 2))) * gen_pow
                gen_pow = gen_pow * field.gen()
            if not z.is_zero():
                return z
    return _rand_unit(field, rng)


def _rand_mw(field, n, rng, theory="kmw", nterms=2) -> MWElement:
    """A random K^MW_n class.  The theory filter shapes the samples: "km"
    keeps eta out (pure symbols), "w" forces eta in (Witt-flavored
    classes), "kmw" mixes."""
    terms = {}
    for _ in range(rng.randint(1, nterms)):
        if theory == "km":
            m = 0
        elif theory == "w":
            m = rng.randint(1, 2)
        else:
            m = rng.randint(0, 1)
        length = max(n + m, 0)
        syms = tuple(_unit_of(field, rng) for _ in range(length))
        c = rng.randint(-2, 2)
        if c:
            terms[(m, syms)] = c
    return MWElement(field, n, terms)


def _rand_gw(field, rng, rank=2) -> GWClass:
    plus = tuple(_rand_unit(field, rng) for _ in range(rng.randint(1, rank)))
    minus = tuple(_rand_unit(field, rng) for _ in range(rng.randint(0, 1)))
    return GWClass(field, plus, minus)


def _fail(witness: str):
    return "fail", witness


_PASS = ("pass", None)


# --------------------------------------------------------------------------
# the checks
# --------------------------------------------------------------------------


def _check_transfer_functoriality(ctx: _Ctx):
    towers = []
    if ctx.has("GF(3)", "GF(9)"):
        k3, k9, k81 = finite_field(3), finite_field(3, 2), finite_field(3, 4)
        towers.append((k3, k9, k81))
    if ctx.has("GF(5)"):
        towers.append((finite_field(5), finite_field(5, 2), finite_field(5, 4)))
    for base, mid, top in towers:
        rng = ctx.rng(f"transfer_functoriality/{base.q}")
        direct = finite_subextension(base, top)
        chain = [finite_subextension(base, mid), finite_subextension(mid, top)]
        for i in range(ctx.count(4)):
            n = rng.choice([0, 1, 2])
            beta = _rand_mw(top, n, rng, ctx.theory)
            if not transfer(direct, beta).eq(tower_transfer(chain, beta)):
                return _fail(f"tower GF({base.q})->GF({top.q}), n={n}, beta={beta!r}")
    return _PASS


def _check_base_change_weak(ctx: _Ctx):
    cases = []
    if ctx.has("GF(3)", "GF(9)"):
        k3 = finite_field(3)
        cases.append((k3, finite_field(3, 2), finite_field(3, 3)))
    if ctx.has("GF(5)"):
        k5 = finite_field(5)
        cases.append((k5, finite_field(5, 2), finite_field(5, 3)))
    for base, E, L in cases:
        rng = ctx.rng(f"base_change_weak/{base.q}")
        f_ext = finite_subextension(base, E)
        l_ext = finite_subextension(base, L)
        for i in range(ctx.count(3)):
            n = rng.choice([0, 1])
            mu = _rand_mw(E, n, rng, ctx.theory)
            lhs, rhs = strong_r1c_sides(f_ext, l_ext, mu)
            if not lhs.eq(rhs):
                return _fail(f"disjoint GF({E.q}),GF({L.q}) over GF({base.q}): mu={mu!r}")
    return _PASS


def _proj_exts(ctx: _Ctx):
    exts = []
    if ctx.has("GF(3)", "GF(9)"):
        exts.append(("GF(9)/GF(3)", finite_subextension(finite_field(3), finite_field(3, 2))))
    if ctx.has("Q", "Q(i)"):
        exts.append(("Q(i)/Q", _qi_ext()))
    return exts


def _check_projection_base(ctx: _Ctx):
    for name, ext in _proj_exts(ctx):
        rng = ctx.rng(f"projection_base/{name}")
        for i in range(ctx.count(3)):
            a = _rand_gw(ext.base, rng)
            mu = _rand_mw(ext.field, rng.choice([0, 1]), rng, ctx.theory)
            lhs = transfer(ext, mu.act(res_gw(ext, a)))
            rhs = transfer(ext, mu).act(a)
            if not lhs.eq(rhs):
                return _fail(f"{name}: a={a!r}, mu={mu!r}")
    return _PASS


def _check_projection_field(ctx: _Ctx):
    for name, ext in _proj_exts(ctx):
        rng = ctx.rng(f"projection_field/{name}")
        for i in range(ctx.count(3)):
            b = _rand_gw(ext.field, rng)
            nu = _rand_mw(ext.base, rng.choice([0, 1]), rng, ctx.theory)
            lhs = transfer(ext, res_ext(ext, nu).act(b))
            rhs = transfer(ext, MWElement.from_gw(b)) * nu
            if not lhs.eq(rhs):
                return _fail(f"{name}: b={b!r}, nu={nu!r}")
    return _PASS


def _radical_cover(E: RationalFunctionField, d: int = 2):
    t = E.from_poly(Poly.gen(E.base))
    pi = Poly(E, [-t] + [E.zero()] * (d - 1) + [E.one()])
    return make_extension(E, pi)


def _check_residue_transfer(ctx: _Ctx):
    if not ctx.has("GF(3)(t)"):
        return _PASS
    E = ctx.catalog["GF(3)(t)"]
    ext = _radical_cover(E)
    F = E.base
    one, t = Poly(F, [F.one()]), Poly.gen(F)
    vs = [
        finite_place(E, t),
        finite_place(E, t - one),
        infinite_place(E),
    ]
    rng = ctx.rng("residue_transfer")
    for i in range(ctx.count(3)):
        n = rng.choice([1, 2])
        beta = _rand_mw(ext.field, n, rng, ctx.theory)
        for v in vs:
            lhs, rhs = residue_transfer_sides(ext, v, beta)
            if not lhs.eq(rhs):
                return _fail(f"v={v!r}, beta={beta!r}")
    return _PASS


def _check_residue_base_change(ctx: _Ctx):
    if not ctx.has("GF(3)(t)", "GF(9)"):
        return _PASS
    E = ctx.catalog["GF(3)(t)"]
    F, Fp = E.base, ctx.catalog["GF(9)"]
    Ep = rational_function_field(Fp, E.var)
    rng = ctx.rng("residue_base_change")
    t = Poly.gen(F)
    pis = [t, t + Poly(F, [F.one()]), Poly(F, [F.one(), F.zero(), F.one()])]
    for i in range(ctx.count(3)):
        gamma = _rand_mw(E, rng.choice([1, 2]), rng, ctx.theory)
        moved = map_symbols(
            gamma, Ep, lambda x: Ep.from_fraction(
                Poly(Fp, [Fp.embed(c) for c in x.num.coeffs]),
                Poly(Fp, [Fp.embed(c) for c in x.den.coeffs]),
            )
        )
        for pi in pis:
            v = finite_place(E, pi)
            down = residue(gamma, v)
            pulled = Poly(Fp, [Fp.embed(c) for c in pi.coeffs])
            for g, e in factor_poly(pulled):
                assert e == 1, "constant base change is unramified"
                w = finite_place(Ep, g)
                kw = w.residue_field
                vx = v.ext

                def iota(c, vx=vx, kw=kw, w=w):
                    return vx.to_poly(c)(w.ext.theta, lift=kw.embed)

                lhs = residue(moved, w)
                rhs = map_symbols(down, kw, iota)
                if not lhs.eq(rhs):
                    return _fail(f"pi={pi.format('t')}, w={w!r}, gamma={gamma!r}")
    return _PASS


def _ground_fields(ctx: _Ctx):
    out = []
    for name in ("GF(3)", "GF(5)", "Q"):
        if name in ctx.catalog:
            out.append((name, ctx.catalog[name]))
    return out


def _check_residue_of_restriction(ctx: _Ctx):
    for name, F in _ground_fields(ctx):
        E = rational_function_field(F)
        rng = ctx.rng(f"residue_of_restriction/{name}")
        t = Poly.gen(F)
        vs = [finite_place(E, t), finite_place(E, t + Poly(F, [F.one()])), infinite_place(E)]
        for i in range(ctx.count(3)):
            c = _rand_mw(F, rng.choice([0, 1, 2]), rng, ctx.theory)
            gamma = restrict(c, E)
            for v in vs:
                if not residue(gamma, v).is_zero():
                    return _fail(f"{name}: v={v!r}, c={c!r}")
    return _PASS


def _check_specialization_section(ctx: _Ctx):
    for name, F in _ground_fields(ctx):
        E = rational_function_field(F)
        rng = ctx.rng(f"specialization_section/{name}")
        t = Poly.gen(F)
        vs = [finite_place(E, t), finite_place(E, t - Poly(F, [F.one()]))]
        for i in range(ctx.count(3)):
            c = _rand_mw(F, rng.choice([0, 1, 2]), rng, ctx.theory)
            gamma = restrict(c, E)
            for v in vs:
                if not specialize(gamma, v).eq(c):
                    return _fail(f"{name}: v={v!r}, c={c!r}")
    return _PASS


def _check_unit_residue_commutation(ctx: _Ctx):
    if not ctx.has("GF(3)(t)"):
        return _PASS
    E = ctx.catalog["GF(3)(t)"]
    F = E.base
    rng = ctx.rng("unit_residue_commutation")
    t = Poly.gen(F)
    pis = [t, Poly(F, [F.one(), F.zero(), F.one()])]
    for i in range(ctx.count(4)):
        gamma = _rand_mw(E, rng.choice([1, 2]), rng, ctx.theory)
        for pi in pis:
            v = finite_place(E, pi)
            u = _rand_ff(E, rng)
            while v.valuation(u) != 0:
                u = _rand_ff(E, rng)
            lhs = residue(gamma.act(GWClass.unit(u)), v)
            rhs = residue(gamma, v).act(GWClass.unit(v.reduce(u)))
            if not lhs.eq(rhs):
                return _fail(f"pi={pi.format('t')}, u={u!r}, gamma={gamma!r}")
    return _PASS


def _total_residue_transfer(gamma: MWElement):
    """Sum over all places (support and infinity) of the geometric
    residue-field transfer of the residue."""
    E = gamma.field
    F = E.base
    places = set()
    for (_, us) in gamma.terms:
        for u in us:
            places.update(places_of_support(u))
    places.add(infinite_place(E))
    out = MWElement.zero(F, gamma.n - 1)
    for v in places:
        part = residue(gamma, v)
        if part.is_zero():
            continue
        kv = v.residue_field
        if kv is F:
            out = out + part
        else:
            tr = residue_field_transfer(F, kv, kv.embed(F.gen()), normalized=False)
            out = out + tr(part)
    return out


def _check_reciprocity(ctx: _Ctx):
    if not ctx.has("GF(3)(t)"):
        return _PASS
    E = ctx.catalog["GF(3)(t)"]
    rng = ctx.rng("reciprocity")
    for i in range(ctx.count(5)):
        gamma = _rand_mw(E, rng.choice([1, 2]), rng, ctx.theory)
        if not _total_residue_transfer(gamma).is_zero():
            return _fail(f"gamma={gamma!r}")
    return _PASS


def _check_split_exact(ctx: _Ctx):
    if not ctx.has("GF(3)(t)"):
        return _PASS
    E = ctx.catalog["GF(3)(t)"]
    rng = ctx.rng("split_exact")
    for i in range(ctx.count(5)):
        gamma = _rand_mw(E, rng.choice([0, 1, 2]), rng, ctx.theory)
        c, parts = milnor_reconstruct(gamma)
        if not assemble(c, parts, E).eq(gamma):
            return _fail(f"gamma={gamma!r}")
    return _PASS


def _check_strong_base_change(ctx: _Ctx):
    cases = []
    if ctx.has("GF(3)", "GF(9)"):
        k3, k9 = finite_field(3), finite_field(3, 2)
        k27 = finite_field(3, 3)
        cases.append(("(GF(3),GF(9),GF(9))", finite_subextension(k3, k9), finite_subextension(k3, k9)))
        cases.append(("(GF(3),GF(27),GF(9))", finite_subextension(k3, k27), finite_subextension(k3, k9)))
    if ctx.has("Q", "Q(i)"):
        cases.append(("(Q,Q(i),Q(i))", _qi_ext(), _qi_ext()))
    if ctx.has("GF(3)"):
        Es = rational_function_field(finite_field(3), "s")
        insep = _radical_cover(Es, 3)
        cases.append(("inseparable cube root", insep, insep))
    for name, f_ext, l_ext in cases:
        rng = ctx.rng(f"strong_base_change/{name}")
        for i in range(ctx.count(3)):
            n = rng.choice([0, 1])
            mu = _rand_mw(f_ext.field, n, rng, ctx.theory)
            lhs, rhs = strong_r1c_sides(f_ext, l_ext, mu,
                                        eps_multiplicity=ctx.eps_mult())
            if not ctx.twist(lhs).eq(rhs):
                return _fail(f"{name}: mu={mu!r}")
    return _PASS


def _check_unicity(ctx: _Ctx):
    exts = _proj_exts(ctx)
    for name, ext in exts:
        rng = ctx.rng(f"unicity/{name}")
        for i in range(ctx.count(4)):
            g = _rand_gw(ext.field, rng)
            geo = ctx.twist(transfer(ext, MWElement.from_gw(g))).to_gw()
            tra = scharlau_transfer(ext, g)
            if not geo.eq(tra):
                return _fail(f"{name}: g={g!r}, geometric={geo!r}, trace={tra!r}")
    return _PASS


def _check_kernel_kill(ctx: _Ctx):
    cases = []
    if ctx.has("GF(3)", "GF(9)"):
        k3 = finite_field(3)
        ext = finite_subextension(k3, finite_field(3, 2))
        seed = MWElement.from_gw(GWClass(k3, (k3.one(),), (-k3.one(),)))
        cases.append(("GF(9)/GF(3)", ext, seed))
    if ctx.has("Q", "Q(i)"):
        ext = _qi_ext()
        seed = MWElement.from_gw(GWClass(QQ, (QQ(1),), (QQ(-1),)))
        cases.append(("Q(i)/Q", ext, seed))
    for name, ext, seed in cases:
        rng = ctx.rng(f"kernel_kill/{name}")
        for i in range(ctx.count(3)):
            beta = seed * _rand_mw(ext.base, rng.choice([0, 1]), rng, ctx.theory)
            if not res_ext(ext, beta).is_zero():
                continue
            if not kernel_kill_check(ext, beta):
                return _fail(f"{name}: beta={beta!r}")
    return _PASS


def _biquadratic_presentations():
    p1 = Poly(QQ, [QQ(9), QQ(0), QQ(-2), QQ(0), QQ(1)])
    p2 = Poly(QQ, [QQ(81), QQ(0), QQ(-14), QQ(0), QQ(1)])
    e1, e2 = make_extension(QQ, p1), make_extension(QQ, p2)
    L2 = e2.field
    t2 = e2.theta
    th1 = (t2 * t2 * t2 + L2.scalar(QQ(13)) * t2) * L2.scalar(QQ(Fraction(1, 36)))

    def iso(z):
        return e1.to_poly(z)(th1, lift=L2.scalar)

    return e1, e2, iso


def _check_conjecture_probe(ctx: _Ctx):
    skewed = ctx.mutate == "probe-skew"
    if ctx.has("GF(3)"):
        k3, k9, k81 = finite_field(3), finite_field(3, 2), finite_field(3, 4)
        direct = finite_subextension(k3, k81)
        chain = [finite_subextension(k3, k9), finite_subextension(k9, k81)]
        rng = ctx.rng("conjecture_probe/GF(81)")
        betas = [MWElement.from_gw(GWClass.one(k81))]
        for i in range(ctx.count(5)):
            betas.append(_rand_mw(k81, rng.choice([0, 1, 2]), rng, ctx.theory))
        for beta in betas:
            one_route = transfer(direct, beta)
            other = tower_transfer(chain, beta)
            if skewed:
                other = -other
            if not one_route.eq(other):
                return "finding", f"GF(81)/GF(3) routes disagree on beta={beta!r}"
    if ctx.has("Q"):
        e1, e2, iso = _biquadratic_presentations()
        rng = ctx.rng("conjecture_probe/biquadratic")
        L1 = e1.field
        betas = [MWElement.from_gw(GWClass.one(L1))]
        for i in range(ctx.count(3)):
            n = rng.choice([0, 1])
            betas.append(_rand_mw(L1, n, rng, ctx.theory, nterms=1))
        for beta in betas:
            one_route = transfer(e1, beta)
            other = transfer(e2, map_symbols(beta, e2.field, iso))
            if skewed:
                other = -other
            if not one_route.eq(other):
                return "finding", f"biquadratic presentations disagree on beta={beta!r}"
    return _PASS


def _check_category_laws(ctx: _Ctx):
    if not ctx.has("GF(3)"):
        return _PASS
    k3, k9, k27 = finite_field(3), finite_field(3, 2), finite_field(3, 3)
    rng = ctx.rng("category_laws")

    def rand_cor(X, Y):
        entries = {}
        for i in range(len(X)):
            for j in range(len(Y)):
                T, labels = mw_corr._pair_data(X, i, Y, j)
                row = {}
                for r in range(labels):
                    if rng.random() < 0.6:
                        row[r] = _rand_gw(T, rng)
                if row:
                    entries[(i, j)] = row
        return mw_corr.MWCor(X, Y, entries)

    X = mw_corr.EtaleScheme(k3, [k9, k3])
    Y = mw_corr.EtaleScheme(k3, [k9, k27])
    Z = mw_corr.EtaleScheme(k3, [k27])
    W = mw_corr.EtaleScheme(k3, [k9])
    for i in range(ctx.count(2)):
        b = rand_cor(X, Y)
        a = rand_cor(Y, Z)
        d = rand_cor(Z, W)
        if not mw_corr.compose(mw_corr.identity(X), b).eq(b):
            return _fail("left identity law")
        if not mw_corr.compose(b, mw_corr.identity(Y)).eq(b):
            return _fail("right identity law")
        lhs = mw_corr.compose(mw_corr.compose(b, a), d)
        rhs = mw_corr.compose(b, mw_corr.compose(a, d))
        if not lhs.eq(rhs):
            return _fail(f"associativity on sample {i}")
    # transpose graph against the point class reproduces the transfer
    Yp = mw_corr.EtaleScheme(k3, [k9])
    beta = mw_corr.from_gw(Yp, [GWClass.one(k9)])
    alpha = mw_corr.from_gw(Yp, [GWClass.one(k9)], into=True)
    got = mw_corr.compose(beta, alpha).entry(0, 0, 0)
    want = scharlau_transfer(finite_subextension(k3, k9), GWClass.one(k9))
    if not got.eq(want):
        return _fail(f"transpose graph composite {got!r} != trace form {want!r}")
    return _PASS


def _rand_cycles_for(X, rng, ctx, rounds, n_choices=(1, 2)):
    E = X.function_field
    for _ in range(rounds):
        n = rng.choice(list(n_choices))
        yield rs.generic_cycle(X, _rand_mw(E, n, rng, ctx.theory))


def _check_rs_pushforward_d(ctx: _Ctx):
    if ctx.has("GF(5)"):
        k5 = finite_field(5)
        P1 = rs.proj_line(k5)
        f = rs.coordinate_map(P1, Poly(k5, [k5.zero(), k5.zero(), k5.one()]))
        rng = ctx.rng("rs_pushforward_d/coordinate")
        for c in _rand_cycles_for(P1, rng, ctx, ctx.count(4)):
            if not rs.differential(rs.pushforward(f, c)).eq(
                rs.pushforward(f, rs.differential(c))
            ):
                return _fail(f"t->t^2 on P1/GF(5): {c!r}")
    if ctx.has("GF(3)", "GF(9)"):
        k3, k9 = finite_field(3), finite_field(3, 2)
        src, dst = rs.affine_line(k9), rs.affine_line(k3)
        f = rs.constants_map(src, dst)
        rng = ctx.rng("rs_pushforward_d/constants")
        for c in _rand_cycles_for(src, rng, ctx, ctx.count(3)):
            if not rs.differential(rs.pushforward(f, c)).eq(
                rs.pushforward(f, rs.differential(c))
            ):
                return _fail(f"constants GF(9)->GF(3): {c!r}")
    return _PASS


def _check_rs_pullback_d(ctx: _Ctx):
    if not ctx.has("GF(3)", "GF(9)"):
        return _PASS
    k3, k9 = finite_field(3), finite_field(3, 2)
    src, dst = rs.proj_line(k3), rs.proj_line(k9)
    g = rs.base_extension(dst, src)
    rng = ctx.rng("rs_pullback_d")
    for c in _rand_cycles_for(src, rng, ctx, ctx.count(4)):
        if not rs.differential(rs.pullback(g, c)).eq(rs.pullback(g, rs.differential(c))):
            return _fail(f"base extension to GF(9): {c!r}")
    return _PASS


def _check_rs_gw_d(ctx: _Ctx):
    if not ctx.has("GF(3)"):
        return _PASS
    k3 = finite_field(3)
    A1 = rs.affine_line(k3)
    rng = ctx.rng("rs_gw_d")
    for c in _rand_cycles_for(A1, rng, ctx, ctx.count(4)):
        a = _rand_unit(k3, rng)
        if not rs.differential(rs.gw_action(a, c)).eq(rs.gw_action(a, rs.differential(c))):
            return _fail(f"a={a!r}, {c!r}")
    return _PASS


def _check_rs_functoriality(ctx: _Ctx):
    if not ctx.has("GF(5)"):
        return _PASS
    k5 = finite_field(5)
    A1 = rs.affine_line(k5)
    sq = rs.coordinate_map(A1, Poly(k5, [k5.zero(), k5.zero(), k5.one()]))
    sh = rs.coordinate_map(A1, Poly(k5, [k5.one(), k5.one()]))
    comp = rs.compose_maps(sh, sq)
    rng = ctx.rng("rs_functoriality")
    for c in _rand_cycles_for(A1, rng, ctx, ctx.count(3)):
        direct = rs.pushforward(comp, c)
        chained = rs.pushforward(sh, rs.pushforward(sq, c))
        if not direct.eq(chained):
            return _fail(f"(t+1)o(t^2): {c!r}")
    return _PASS


def _check_rs_base_change(ctx: _Ctx):
    if not ctx.has("GF(3)", "GF(9)"):
        return _PASS
    k3, k9 = finite_field(3), finite_field(3, 2)
    A3, A9 = rs.affine_line(k3), rs.affine_line(k9)
    f = rs.coordinate_map(A3, Poly(k3, [k3.zero(), k3.zero(), k3.one()]))
    fp = rs.coordinate_map(A9, Poly(k9, [k9.zero(), k9.zero(), k9.one()]))
    g = rs.base_extension(A9, A3)
    rng = ctx.rng("rs_base_change")
    for c in _rand_cycles_for(A3, rng, ctx, ctx.count(3)):
        lhs = rs.pullback(g, rs.pushforward(f, c))
        rhs = rs.pushforward(fp, rs.pullback(g, c))
        if not lhs.eq(rhs):
            return _fail(f"square for t->t^2 under GF(3)->GF(9): {c!r}")
    return _PASS


def _check_a0_sections(ctx: _Ctx):
    if not ctx.has("GF(3)"):
        return _PASS
    k3 = finite_field(3)
    A1 = rs.affine_line(k3)
    E = A1.function_field
    mod = rs.a0(A1, 1)
    rng = ctx.rng("a0_sections")
    for i in range(ctx.count(5)):
        c = _rand_mw(k3, 1, rng, ctx.theory)
        beta = restrict(c, E)
        if not mod.contains(beta):
            return _fail(f"restricted class escaped the kernel: c={c!r}")
        if not mod.witness(beta).eq(c):
            return _fail(f"witness failed to reconstruct c={c!r}")
        if not mod.section(c).eq(beta):
            return _fail(f"section mismatch for c={c!r}")
    pt = rs.point_scheme(k3)
    m0 = rs.a0(pt, 0)
    c = _rand_mw(k3, 0, rng, ctx.theory)
    if not (m0.contains(c) and m0.witness(c).eq(c)):
        return _fail("point-scheme sections are the identity")
    return _PASS


CHECKS = {
    "transfer_functoriality": (
        "tr_{E/F} o tr_{L/E} = tr_{L/F} on finite towers",
        _check_transfer_functoriality,
    ),
    "base_change_weak": (
        "res_{L/F} o tr_{E/F} = tr_{EL/L} o res for linearly disjoint E, L",
        _check_base_change_weak,
    ),
    "projection_base": (
        "tr(res(a) * mu) = a * tr(mu) for a from the base",
        _check_projection_base,
    ),
    "projection_field": (
        "tr(res(nu) * b) = tr(b) * nu for nu from the base",
        _check_projection_field,
    ),
    "residue_transfer": (
        "residue of a transfer = sum of transferred residues above (geometric form)",
        _check_residue_transfer,
    ),
    "residue_base_change": (
        "residues commute with unramified constant base change",
        _check_residue_base_change,
    ),
    "residue_of_restriction": (
        "residues kill classes restricted from the constants",
        _check_residue_of_restriction,
    ),
    "specialization_section": (
        "specialization at a rational place splits restriction",
        _check_specialization_section,
    ),
    "unit_residue_commutation": (
        "residue(<u> * g) = <u-bar> * residue(g) for units at the place",
        _check_unit_residue_commutation,
    ),
    "reciprocity": (
        "sum over all places of transferred residues vanishes",
        _check_reciprocity,
    ),
    "split_exact": (
        "assemble o (constants, residues) reconstructs K^MW of F(t)",
        _check_split_exact,
    ),
    "strong_base_change": (
        "res o tr = sum over tensor components of (length)_eps tr o res",
        _check_strong_base_change,
    ),
    "unicity": (
        "geometric transfer = trace-form transfer on GW",
        _check_unicity,
    ),
    "kernel_kill": (
        "the transferred unit annihilates the kernel of restriction",
        _check_kernel_kill,
    ),
    "conjecture_probe": (
        "transfers agree across presentations of the same extension",
        _check_conjecture_probe,
    ),
    "category_laws": (
        "correspondence composition is associative and unital",
        _check_category_laws,
    ),
    "rs_pushforward_d": (
        "pushforward of cycles commutes with the differential",
        _check_rs_pushforward_d,
    ),
    "rs_pullback_d": (
        "pullback of cycles commutes with the differential",
        _check_rs_pullback_d,
    ),
    "rs_gw_d": (
        "unit actions on cycles commute with the differential",
        _check_rs_gw_d,
    ),
    "rs_functoriality": (
        "pushforward respects composition of curve maps",
        _check_rs_functoriality,
    ),
    "rs_base_change": (
        "pushforward and base extension commute in the cartesian square",
        _check_rs_base_change,
    ),
    "a0_sections": (
        "A^0 of the line is the constants, witnessed both ways",
        _check_a0_sections,
    ),
}


def run(catalog=None, seed: int = 0, samples: int | None = None, checks=None,
        mutate: str | None = None, theory: str = "kmw") -> Report:
    """Execute the selected checks and collect a report.

    `catalog` maps display names to field objects (default: the six-field
    catalog).  `samples=None` uses each check's default count; `samples=0`
    runs nothing and returns an empty passing report.  `mutate` picks one
    deliberate miscalibration.  `theory` shapes the sampled classes."""
    if catalog is None:
        catalog = default_catalog()
    assert catalog, "catalog must be nonempty"
    assert mutate is None or mutate in MUTATIONS, f"unknown mutation {mutate!r}"
    assert theory in THEORIES, f"unknown theory filter {theory!r}"
    names = list(CHECKS) if checks is None else list(checks)
    for name in names:
        if name not in CHECKS:
            raise Unsupported(f"unknown check {name!r}")
    report = Report()
    if samples == 0:
        return report
    ctx = _Ctx(catalog, seed, samples, mutate, theory)
    for name in sorted(names):
        anchor, fn = CHECKS[name]
        t0 = time.perf_counter()
        try:
            status, witness = fn(ctx)
        except MwktError as err:
            status, witness = "fail", f"engine error: {err}"
        millis = int((time.perf_counter() - t0) * 1000)
        report.results.append(CheckResult(name, anchor, status, witness, millis))
    return report


def run_specs(specs, catalog=None, mutate: str | None = None) -> Report:
    """Run a list of CheckSpec plans, each with its own seed, sample count,
    and theory filter, merged into one report."""
    merged = Report()
    for spec in specs:
        part = run(
            catalog=catalog,
            seed=spec.seed,
            samples=spec.samples,
            checks=[spec.check],
            mutate=mutate,
            theory=spec.theory,
        )
        merged.results.extend(part.results)
    return merged
