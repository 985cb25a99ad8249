"""Exact homological algebra for representations of acyclic quivers over F_p.

The package models the bounded derived category of a Dynkin quiver as the
additive hull of the shifted module category (graded objects with component
matrices as morphisms), constructs cones and octahedra, verifies the
pre-triangulated axioms by rank checks, and builds split t-structures from
path reachability between indecomposables.
"""

__version__ = "0.1.0"
