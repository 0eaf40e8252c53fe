"""Finite-difference and angle-deficit curvature kernels.

Images are 2-D numpy arrays indexed ``img[y, x]`` with intensities in
[0, 255]; ``uint8`` is the native type, real-valued arrays are accepted on
the trigonometric path. Every kernel returns a float64 field with the same
shape as its input.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, NamedTuple

import numpy as np

if TYPE_CHECKING:
    from wgcurv.lut import AngleLut

TWO_PI = 2.0 * math.pi


class DimensionError(ValueError):
    """Image too small for the requested stencil."""


class LutConfigError(ValueError):
    """Lookup table used outside its integer, unit-spacing domain."""


class BoundaryPolicy(str, enum.Enum):
    REPLICATE = "replicate"
    INTERIOR_ONLY = "interior"


class StencilMode(str, enum.Enum):
    STANDARD = "standard"
    PAPER_LITERAL = "paper-literal"


@dataclass(frozen=True)
class SchemeConfig:
    """Pixel size and edge/stencil conventions shared by all kernels.

    ``INTERIOR_ONLY`` leaves every pixel whose stencil would read outside
    the image at 0; ``REPLICATE`` clamps neighbor indices to the edge.
    """

    h: float = 1.0
    boundary: BoundaryPolicy = BoundaryPolicy.REPLICATE
    stencil: StencilMode = StencilMode.STANDARD

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0):
            raise ValueError(f"pixel size must be positive and finite, got {self.h!r}")
        object.__setattr__(self, "boundary", BoundaryPolicy(self.boundary))
        object.__setattr__(self, "stencil", StencilMode(self.stencil))


DEFAULT_CONFIG = SchemeConfig()


class NeighborDiffs(NamedTuple):
    d1: float  # I(x, y+h) - I(x, y)
    d2: float  # I(x+h, y) - I(x, y)
    d3: float  # I(x, y-h) - I(x, y)
    d4: float  # I(x-h, y) - I(x, y)


# Stencil reach as (left, right, top, bottom) in pixels; "top" is y-1.
_REACH_GX = (0, 1, 0, 0)
_REACH_GY = (0, 0, 0, 1)
_REACH_XX = (1, 1, 0, 0)
_REACH_YY = (0, 0, 1, 1)
_REACH_WINDOW = (1, 1, 1, 1)


def as_image(img) -> np.ndarray:
    """Validate a grayscale image and return it as a 2-D array (no copy)."""
    a = np.asarray(img)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D grayscale image, got shape {a.shape}")
    if a.dtype == np.uint8:
        return a
    if a.dtype.kind not in "iuf":
        raise TypeError(f"unsupported image dtype {a.dtype}")
    if a.size and not np.isfinite(a).all():
        raise ValueError("image contains NaN or Inf")
    if a.size and (a.min() < 0 or a.max() > 255):
        raise ValueError("intensities must lie in [0, 255]")
    return a


def _require(img: np.ndarray, min_width: int = 1, min_height: int = 1):
    height, width = img.shape
    if width < min_width or height < min_height:
        raise DimensionError(
            f"image is {width}x{height}, stencil needs at least {min_width}x{min_height}"
        )


def _padded(img: np.ndarray, dtype=np.float64) -> np.ndarray:
    # pad in the native dtype, convert once
    return np.pad(img, 1, mode="edge").astype(dtype, copy=False)


def _finish(field: np.ndarray, cfg: SchemeConfig, reach) -> np.ndarray:
    if cfg.boundary is BoundaryPolicy.INTERIOR_ONLY:
        left, right, top, bottom = reach
        height, width = field.shape
        if left:
            field[:, :left] = 0.0
        if right:
            field[:, width - right :] = 0.0
        if top:
            field[:top, :] = 0.0
        if bottom:
            field[height - bottom :, :] = 0.0
    return field


def _run_banded(kernel: Callable[[np.ndarray], np.ndarray], padded: np.ndarray, threads: int = 1):
    """Apply ``kernel`` to row bands of a 1-pixel padded array.

    Each band carries a one-row halo on both sides; the kernel returns the
    unpadded rows. Bands are disjoint in the output, so the result does not
    depend on ``threads``.
    """
    rows = padded.shape[0] - 2
    if threads is None or threads <= 1 or rows < 2:
        return kernel(padded)
    n_bands = min(rows, threads * 4)
    bounds = np.linspace(0, rows, n_bands + 1).astype(int)
    out = np.empty((rows, padded.shape[1] - 2), dtype=np.float64)

    def work(r0, r1):
        out[r0:r1] = kernel(padded[r0 : r1 + 2])

    with ThreadPoolExecutor(max_workers=threads) as pool:
        for fut in [pool.submit(work, r0, r1) for r0, r1 in zip(bounds[:-1], bounds[1:]) if r1 > r0]:
            fut.result()
    return out


# ---------------------------------------------------------------------------
# finite-difference stencils


def _center(P):
    return P[1:-1, 1:-1]


def _stencil_gx(P, h):
    return (P[1:-1, 2:] - _center(P)) / h


def _stencil_gy(P, h):
    return (P[2:, 1:-1] - _center(P)) / h


def _stencil_xx(P, h, mode):
    c = _center(P)
    if mode is StencilMode.STANDARD:
        return (P[1:-1, 2:] + P[1:-1, :-2] - 2.0 * c) / (h * h)
    return (P[1:-1, 2:] + P[1:-1, :-2] - c) / (h * h)


def _stencil_yy(P, h, mode):
    c = _center(P)
    if mode is StencilMode.STANDARD:
        return (P[2:, 1:-1] + P[:-2, 1:-1] - 2.0 * c) / (h * h)
    return (P[2:, 1:-1] + P[:-2, 1:-1] - c) / (h * h)


def _stencil_xy(P, h, mode):
    # I(x+h,y+h) + I(x-h,y-h) - I(x+h,y-h) - I(x-h,y+h)
    s = P[2:, 2:] + P[:-2, :-2] - P[:-2, 2:] - P[2:, :-2]
    if mode is StencilMode.STANDARD:
        return s / (4.0 * h * h)
    return s / (h * h)


def gradient_x(img, cfg: SchemeConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Forward difference ``(I(x+h, y) - I(x, y)) / h``."""
    img = as_image(img)
    _require(img, min_width=2)
    return _finish(_stencil_gx(_padded(img), cfg.h), cfg, _REACH_GX)


def gradient_y(img, cfg: SchemeConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Forward difference ``(I(x, y+h) - I(x, y)) / h``."""
    img = as_image(img)
    _require(img, min_height=2)
    return _finish(_stencil_gy(_padded(img), cfg.h), cfg, _REACH_GY)


def second_xx(img, cfg: SchemeConfig = DEFAULT_CONFIG) -> np.ndarray:
    img = as_image(img)
    _require(img, min_width=3)
    return _finish(_stencil_xx(_padded(img), cfg.h, cfg.stencil), cfg, _REACH_XX)


def second_yy(img, cfg: SchemeConfig = DEFAULT_CONFIG) -> np.ndarray:
    img = as_image(img)
    _require(img, min_height=3)
    return _finish(_stencil_yy(_padded(img), cfg.h, cfg.stencil), cfg, _REACH_YY)


def second_xy(img, cfg: SchemeConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Mixed derivative from the four diagonal neighbours.

    Standard mode divides by ``4 h**2``; paper-literal mode by ``h**2``.
    """
    img = as_image(img)
    _require(img, 3, 3)
    return _finish(_stencil_xy(_padded(img), cfg.h, cfg.stencil), cfg, _REACH_WINDOW)


def _classical_kernel(cfg: SchemeConfig, weighted: bool):
    h, mode = cfg.h, cfg.stencil

    def kernel(P):
        ix = _stencil_gx(P, h)
        iy = _stencil_gy(P, h)
        num = _stencil_xx(P, h, mode) * _stencil_yy(P, h, mode)
        ixy = _stencil_xy(P, h, mode)
        num -= ixy * ixy
        metric = 1.0 + ix * ix + iy * iy
        if not weighted:
            metric *= metric
        num /= metric
        return num

    return kernel


def gaussian_curvature_classical(img, cfg: SchemeConfig = DEFAULT_CONFIG, *, threads: int = 1) -> np.ndarray:
    """``K = (Ixx*Iyy - Ixy**2) / (1 + Ix**2 + Iy**2)**2`` per pixel."""
    img = as_image(img)
    _require(img, 3, 3)
    out = _run_banded(_classical_kernel(cfg, weighted=False), _padded(img), threads)
    return _finish(out, cfg, _REACH_WINDOW)


def weighted_curvature_classical(img, cfg: SchemeConfig = DEFAULT_CONFIG, *, threads: int = 1) -> np.ndarray:
    """``Kw = (Ixx*Iyy - Ixy**2) / (1 + Ix**2 + Iy**2)`` per pixel."""
    img = as_image(img)
    _require(img, 3, 3)
    out = _run_banded(_classical_kernel(cfg, weighted=True), _padded(img), threads)
    return _finish(out, cfg, _REACH_WINDOW)


# ---------------------------------------------------------------------------
# angle-deficit scheme


def corner_angle(d_i, d_next, h=1.0):
    """Angle at the centre vertex of the triangle spanned by two axis neighbours.

    The neighbours sit at ``(h, 0, d_i)`` and ``(0, h, d_next)`` relative to
    the centre pixel. Accepts scalars or broadcastable arrays; the result is
    always in ``[0, pi]``.
    """
    d_i = np.asarray(d_i, dtype=np.float64)
    d_next = np.asarray(d_next, dtype=np.float64)
    hh = np.float64(h) * np.float64(h)
    cos = d_i * d_next / np.sqrt((hh + d_i * d_i) * (hh + d_next * d_next))
    theta = np.arccos(np.clip(cos, -1.0, 1.0))
    if theta.ndim == 0:
        return float(theta)
    return theta


def neighbor_diffs(img, x: int, y: int, policy: BoundaryPolicy = BoundaryPolicy.REPLICATE) -> NeighborDiffs:
    img = as_image(img)
    height, width = img.shape
    if not (0 <= x < width and 0 <= y < height):
        raise IndexError(f"pixel ({x}, {y}) outside {width}x{height} image")
    policy = BoundaryPolicy(policy)
    if policy is BoundaryPolicy.INTERIOR_ONLY and not (0 < x < width - 1 and 0 < y < height - 1):
        raise IndexError(f"pixel ({x}, {y}) is on the border; interior-only policy")

    def at(xx, yy):
        v = img[min(max(yy, 0), height - 1), min(max(xx, 0), width - 1)]
        return v.item()

    c = at(x, y)
    return NeighborDiffs(at(x, y + 1) - c, at(x + 1, y) - c, at(x, y - 1) - c, at(x - 1, y) - c)


def _deficit_trig_kernel(h):
    def kernel(P):
        c = _center(P)
        d1 = P[2:, 1:-1] - c
        d2 = P[1:-1, 2:] - c
        d3 = P[:-2, 1:-1] - c
        d4 = P[1:-1, :-2] - c
        total = corner_angle(d1, d2, h)
        total += corner_angle(d2, d3, h)
        total += corner_angle(d3, d4, h)
        total += corner_angle(d4, d1, h)
        return TWO_PI - total

    return kernel


def _deficit_full_lut_kernel(flat):
    side = 511

    def kernel(P):
        # v = d + 255 in [0, 510]; table index is v_i * 511 + v_next
        c = _center(P) - 255
        v1 = P[2:, 1:-1] - c
        v2 = P[1:-1, 2:] - c
        v3 = P[:-2, 1:-1] - c
        v4 = P[1:-1, :-2] - c
        total = flat.take(v1 * side + v2)
        total += flat.take(v2 * side + v3)
        total += flat.take(v3 * side + v4)
        total += flat.take(v4 * side + v1)
        return TWO_PI - total

    return kernel


def _deficit_lut_kernel(lut):
    def kernel(P):
        c = _center(P)
        d1 = P[2:, 1:-1] - c
        d2 = P[1:-1, 2:] - c
        d3 = P[:-2, 1:-1] - c
        d4 = P[1:-1, :-2] - c
        total = lut.lookup(d1, d2)
        total += lut.lookup(d2, d3)
        total += lut.lookup(d3, d4)
        total += lut.lookup(d4, d1)
        return TWO_PI - total

    return kernel


def _integer_intensities(img: np.ndarray) -> bool:
    if img.dtype.kind in "iu":
        return True
    return bool(np.all(np.floor(img) == img))


def weighted_curvature_discrete(
    img,
    cfg: SchemeConfig = DEFAULT_CONFIG,
    lut: AngleLut | None = None,
    *,
    threads: int = 1,
) -> np.ndarray:
    """Angle deficit ``2*pi - sum(theta_i)`` over the four cross triangles.

    Angles come from the pairs (d1, d2), (d2, d3), (d3, d4), (d4, d1). With a
    lookup table the image must hold integer intensities and ``cfg.h`` must
    be 1; a full table gives bit-identical results to the trig path.
    """
    img = as_image(img)
    _require(img, 3, 3)
    if lut is None:
        out = _run_banded(_deficit_trig_kernel(cfg.h), _padded(img), threads)
    else:
        if cfg.h != 1.0:
            raise LutConfigError(f"lookup table requires h == 1, got h={cfg.h}")
        if not _integer_intensities(img):
            raise LutConfigError("lookup table requires integer intensities")
        padded = _padded(img, np.int32)
        if lut.is_full:
            kernel = _deficit_full_lut_kernel(lut.table.ravel())
        else:
            kernel = _deficit_lut_kernel(lut)
        out = _run_banded(kernel, padded, threads)
    return _finish(out, cfg, _REACH_WINDOW)
