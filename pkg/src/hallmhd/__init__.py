"""Pseudo-spectral Hall-MHD suite: periodic 3D solvers, axisymmetric swirl and KMC waves,
Maxwell-regularized Hall problem, and plasma regime scaling."""

from .hall import DiagnosticsRecord, MhdState
from .integrate import IntegratorConfig, run, step
from .spectral import Grid3, RealVectorField, SpectralVectorField

__all__ = ["Grid3", "SpectralVectorField", "RealVectorField", "MhdState", "DiagnosticsRecord",
           "IntegratorConfig", "run", "step"]
__version__ = "0.1.0"
