"""Smooth compactly supported profiles and polynomials small on a half circle."""

from .arc_poly import ARC_CAPACITY, ArcPoly, CapacityBracket, build_arc_poly, capacity_probe
from .profiles import (
    BumpProfile,
    Cutoff,
    build_gevrey_step,
    build_plateau,
    build_smooth_cutoff,
    build_window,
    plateau_profile,
    window_profile,
)

__all__ = [
    "ARC_CAPACITY",
    "ArcPoly",
    "BumpProfile",
    "CapacityBracket",
    "Cutoff",
    "build_arc_poly",
    "build_gevrey_step",
    "build_plateau",
    "build_smooth_cutoff",
    "build_window",
    "capacity_probe",
    "plateau_profile",
    "window_profile",
]
