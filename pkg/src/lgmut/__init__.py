"""Exact mutations of Landau-Ginzburg seeds and toric potentials."""

from .laurent import LaurentPoly, LocalizedPoly, NonLaurent, parse_poly
from .lattice import UnimodularMap
from .seeds import LGSeed, canonical_form, catalog, is_lg_seed, seed_mutate

__version__ = "0.1.0"

__all__ = [
    "LaurentPoly",
    "LocalizedPoly",
    "NonLaurent",
    "parse_poly",
    "UnimodularMap",
    "LGSeed",
    "canonical_form",
    "catalog",
    "is_lg_seed",
    "seed_mutate",
]
