"""Exact field arithmetic: finite fields with a compatible tower, Q and its
small extensions, rational function fields, places, and factorization."""

from .base import Field, FieldElement
from .extension import ExtField, Extension, ext_field, make_extension
from .factor import factor_poly, is_irreducible, squarefree_decomposition
from .finite import FiniteField, finite_field
from .funcfield import RationalFunctionField, rational_function_field
from .linalg import det, invert, solve
from .places import (
    Place,
    finite_place,
    infinite_place,
    places_of_support,
    rational_place,
)
from .poly import Poly
from .rationals import QQ, RationalField
from .tensor import ArtinDecomposition, Component, tensor_decompose

__all__ = [
    "Field",
    "FieldElement",
    "Poly",
    "FiniteField",
    "finite_field",
    "QQ",
    "RationalField",
    "RationalFunctionField",
    "rational_function_field",
    "ExtField",
    "Extension",
    "ext_field",
    "make_extension",
    "factor_poly",
    "is_irreducible",
    "squarefree_decomposition",
    "Place",
    "finite_place",
    "infinite_place",
    "rational_place",
    "places_of_support",
    "tensor_decompose",
    "ArtinDecomposition",
    "Component",
    "det",
    "invert",
    "solve",
]
