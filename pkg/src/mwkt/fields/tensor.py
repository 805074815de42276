"""Decomposition of F tensor_E L into its local components.

Both inputs are presented extensions of the same base E.  The tensor product
F (x)_E L is L[x]/(f) for f the presentation polynomial of F/E mapped into
L[x]; factoring f there splits the product into one component per irreducible
factor g, with residue field (R/p) = L[x]/(g) and multiplicity e = the
exponent of g (the length of the local ring).  Each component records the two
structure maps: phi (from F, sending theta_F to the root of g) and psi (from
L, the coefficient embedding).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .extension import Extension, make_extension
from .factor import factor_poly
from .poly import Poly


@dataclass
class Component:
    ext: Extension  # (R/p) over L
    e: int
    phi: object  # callable F -> R/p
    psi: object  # callable L -> R/p

    @property
    def residue_field(self):
        return self.ext.field


@dataclass
class ArtinDecomposition:
    f_ext: Extension
    l_ext: Extension
    components: list = dc_field(default_factory=list)


def tensor_decompose(f_ext: Extension, l_ext: Extension) -> ArtinDecomposition:
    assert f_ext.base is l_ext.base, "extensions must share the base field"
    L = l_ext.field
    f_over_L = Poly(L, [l_ext.embed(c) for c in f_ext.minpoly.coeffs])
    pieces = factor_poly(f_over_L)
    decomp = ArtinDecomposition(f_ext, l_ext)
    for g, e in pieces:
        comp_ext = make_extension(L, g)
        decomp.components.append(
            Component(ext=comp_ext, e=e, phi=_phi_map(f_ext, l_ext, comp_ext), psi=comp_ext.embed)
        )
    total = sum(c.e * c.ext.degree for c in decomp.components)
    assert total == f_ext.degree, "component degrees do not add up"
    return decomp


def _phi_map(f_ext: Extension, l_ext: Extension, comp_ext: Extension):
    """F -> R/p: write b over E in the theta_F power basis, then evaluate at
    the component's root with coefficients routed E -> L -> R/p."""

    def lift(c):
        return comp_ext.embed(l_ext.embed(c))

    def phi(b):
        p = f_ext.to_poly(b)
        return p(comp_ext.theta, lift=lift)

    return phi
