"""Recursive-convolution FDTD for the Drude-dispersive Maxwell wave equation.

Modules
-------
materials
    Drude parameters, permittivity and unit scaling.
exact
    Dispersion roots and closed-form reference solutions.
stability
    Amplification factors and stable time steps of the RC2/RC4 schemes.
grid
    Ghost-padded grids, difference operators and discrete norms.
stepper
    RC2/RC4 interior updates and history recursions.
interface
    Ghost-cell coupling of two Drude subdomains.
harness
    Experiment drivers and CSV output; ``plotting`` renders the CSVs.
"""

from .materials import VACUUM, MaterialParams, PhysicalMaterial, ScalingConvention, silver

__all__ = ["MaterialParams", "PhysicalMaterial", "ScalingConvention", "VACUUM", "silver"]
__version__ = "0.1.0"
