"""Hybrid quasicrystal potentials, transport simulation and symbolic diagnostics."""

from ._core import (
    Error,
    boshernitzan,
    classify,
    complexity,
    evolve,
    find_all,
    fit_beta,
    gen,
    hybrid_potential,
    iterate,
    matrix,
    multiplicative_independence,
    spectral_info,
    witness_search,
)

__all__ = [
    "Error",
    "boshernitzan",
    "classify",
    "complexity",
    "evolve",
    "find_all",
    "fit_beta",
    "gen",
    "hybrid_potential",
    "iterate",
    "matrix",
    "multiplicative_independence",
    "spectral_info",
    "witness_search",
]
