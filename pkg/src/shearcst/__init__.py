"""Coherent state transform on the shear-extended Heisenberg group and the harmonic oscillator on its image."""
from .errors import *  # noqa: F401,F403
from .grids import ModelParams, PhaseSlice, PhaseVolume, SampledLine, UniformGrid
from .group import AlgebraVector, GroupElement, HeisenbergElement

__all__ = ["ModelParams", "UniformGrid", "SampledLine", "PhaseSlice", "PhaseVolume",
           "GroupElement", "HeisenbergElement", "AlgebraVector"]
__version__ = "0.1.0"
