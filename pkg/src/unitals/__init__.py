"""Unitals of order 5 (Steiner systems S(2,6,126)) from difference families.

Submodules: groups (Cayley tables and construction terms), designs
(development and Steiner verification), fingerprint (the hyperbolic frequency
invariant), difference (algebraic family checking), isomorph (isomorphism,
automorphisms, canonical keys), catalog (the transcribed family lists),
search (bounded difference-family search), cli.
"""

__version__ = "0.1.0"
