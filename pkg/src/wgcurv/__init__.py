"""Weighted Gaussian curvature of grayscale images.

Two schemes are provided: the classical finite-difference formula and the
discrete angle-deficit formula (with optional lookup-table acceleration).
"""

from wgcurv.core import (
    BoundaryPolicy,
    DimensionError,
    LutConfigError,
    NeighborDiffs,
    SchemeConfig,
    StencilMode,
    corner_angle,
    gaussian_curvature_classical,
    gradient_x,
    gradient_y,
    neighbor_diffs,
    second_xx,
    second_xy,
    second_yy,
    weighted_curvature_classical,
    weighted_curvature_discrete,
)
from wgcurv.lut import AngleLut, build_full_lut, build_partial_lut, lookup_angle
from wgcurv.synth import CurvatureStats, SyntheticSpec, curvature_stats, generate

__version__ = "0.1.0"

__all__ = [
    "AngleLut",
    "BoundaryPolicy",
    "CurvatureStats",
    "DimensionError",
    "LutConfigError",
    "NeighborDiffs",
    "SchemeConfig",
    "StencilMode",
    "SyntheticSpec",
    "build_full_lut",
    "build_partial_lut",
    "corner_angle",
    "curvature_stats",
    "gaussian_curvature_classical",
    "generate",
    "gradient_x",
    "gradient_y",
    "lookup_angle",
    "neighbor_diffs",
    "second_xx",
    "second_xy",
    "second_yy",
    "weighted_curvature_classical",
    "weighted_curvature_discrete",
]
