"""Exact computations with equivariant functions on finite groups.

The package builds convolution algebras of twisted-equivariant functions
attached to a finite group with a chosen pair of normal subgroups and a
central character, extracts their fusion rings, computes modular data of
metric abelian groups, and certifies structural properties (rigidity,
equivariantization) exactly, with no floating point anywhere.
"""

__version__ = "0.1.0"
