"""Symmetrized Kahan discretizations of polynomial ODEs."""

from ._core import (
    KahanError,
    Polynomial,
    beam_spectrum,
    darboux,
    discretize,
    orbit,
    presets,
    run,
    symmetrize,
)

__all__ = [
    "KahanError",
    "Polynomial",
    "beam_spectrum",
    "darboux",
    "discretize",
    "orbit",
    "presets",
    "run",
    "symmetrize",
]
