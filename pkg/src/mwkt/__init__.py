"""Exact symbol calculus for Milnor-Witt K-theory over small fields:
Grothendieck-Witt rings, the eta-graded symbol algebra, residue and
transfer maps, one-dimensional cycle complexes, and finite correspondences
in dimension zero."""

__version__ = "0.1.0"
