"""Soliton surfaces in R^3 from Lax-pair deformations.

Builds the one-soliton Lax frame, deforms it along spectral, spectral-gauge,
and symmetry directions, evaluates the resulting surfaces and their geometry
in closed form, and verifies every closed form against an independent
finite-difference oracle.
"""
from .soliton import SolitonParams

__all__ = ["SolitonParams"]
__version__ = "0.1.0"
