"""Shared random generators for the test suite (package re-exports)."""

from cubehom.rand import (direct_sum_ccomplex, rnd_chain_complex, rnd_cmap,
                          rnd_ccomplex, rnd_cube, rnd_fraction, rnd_gram,
                          rnd_homotopy_comps, rnd_invertible, rnd_matrix,
                          rnd_metobj, rnd_one_cube, rnd_retraction)

__all__ = [
    "direct_sum_ccomplex", "rnd_chain_complex", "rnd_cmap", "rnd_ccomplex",
    "rnd_cube", "rnd_fraction", "rnd_gram", "rnd_homotopy_comps",
    "rnd_invertible", "rnd_matrix", "rnd_metobj", "rnd_one_cube",
    "rnd_retraction",
]
