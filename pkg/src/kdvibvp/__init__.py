"""Solvers and verification tools for KdV initial-boundary value problems.

The package is organized around the constructive solution machinery for
the KdV equation posed on the right half-line, the left half-line, and a
line segment: Riemann-Liouville fractional integrals, the Airy kernel and
its Mellin transforms, the Airy group and Duhamel propagators, the
boundary forcing operator family, Fourier-weighted space-time norms, and
Picard iteration of the boundary-corrected Duhamel maps.
"""

from kdvibvp.signals import (
    SpaceTimeField,
    SpatialProfile,
    TimeSignal,
    smooth_bump,
    space_grid,
    time_grid,
)

__all__ = [
    "SpaceTimeField",
    "SpatialProfile",
    "TimeSignal",
    "smooth_bump",
    "space_grid",
    "time_grid",
]

__version__ = "0.1.0"
