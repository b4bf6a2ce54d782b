"""rootfold: exact combinatorics of root systems with automorphisms.

Folding operations and their dualities, echelonnage / Knop / Macdonald root
systems from Galois actions, extended affine Weyl groups with admissible
sets, twining characters, unequal-parameter Kazhdan-Lusztig polynomials, the
geometric basis of the parahoric Hecke-algebra center, and test-function
expansions.  All arithmetic is exact.
"""

__version__ = "1.0.0"
