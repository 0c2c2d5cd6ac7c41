"""cubehom: machine verification of cube-chain homological algebra over Q.

A library and CLI that builds exact cubes of rational vector spaces,
C-complexes with their maps and homotopies, multi-relative complexes with
signed pullback operators, subset-division sign calculus, glued bundles on
iterated doubles, a formal Chern-symbol bicomplex, and symbolic logarithmic
forms, and checks the defining identities of all of them exactly.
"""

__version__ = "0.1.0"
