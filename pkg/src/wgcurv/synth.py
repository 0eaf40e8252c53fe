"""Synthetic developable test surfaces and curvature summary statistics.

Cones and axis-aligned cylinder ridges have zero Gaussian curvature away
from their apex and rim, so the mean ``|Kw|`` a scheme reports on them is a
direct measure of its discretisation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class Cone:
    cx: float
    cy: float
    radius: float
    peak: float

    def __post_init__(self):
        _positive(radius=self.radius, peak=self.peak)

    def render(self, x, y):
        return self.peak * np.maximum(0.0, 1.0 - np.hypot(x - self.cx, y - self.cy) / self.radius)


@dataclass(frozen=True)
class CylinderRidge:
    """Half cylinder (elliptic profile) lying along the x or y axis.

    ``orientation="vertical"`` runs the ridge along y, centred on
    ``x = center``.
    """

    orientation: str
    center: float
    radius: float
    peak: float

    def __post_init__(self):
        if self.orientation not in ("vertical", "horizontal"):
            raise ValueError(f"orientation must be 'vertical' or 'horizontal', got {self.orientation!r}")
        _positive(radius=self.radius, peak=self.peak)

    def render(self, x, y):
        t = (x if self.orientation == "vertical" else y) - self.center
        return self.peak * np.sqrt(np.maximum(0.0, 1.0 - (t / self.radius) ** 2))


@dataclass(frozen=True)
class Ramp:
    a: float
    b: float
    c: float

    def render(self, x, y):
        return self.a * x + self.b * y + self.c


@dataclass(frozen=True)
class Flat:
    level: float

    def render(self, x, y):
        return np.full(np.broadcast(x, y).shape, float(self.level))


Primitive = Union[Cone, CylinderRidge, Ramp, Flat]


def _positive(**kw):
    for name, v in kw.items():
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be positive, got {v!r}")


@dataclass(frozen=True)
class SyntheticSpec:
    """Image size plus one or more primitives, composited by pointwise max."""

    primitives: tuple
    width: int
    height: int
    quantize: bool = True
    clamp: bool = True

    def __post_init__(self):
        prims = self.primitives
        if not isinstance(prims, (tuple, list)):
            prims = (prims,)
        if not prims:
            raise ValueError("at least one primitive is required")
        object.__setattr__(self, "primitives", tuple(prims))
        if int(self.width) < 1 or int(self.height) < 1:
            raise ValueError(f"image size must be positive, got {self.width}x{self.height}")


def generate(spec: SyntheticSpec) -> np.ndarray:
    """Render ``spec``: uint8 when quantised, float64 otherwise.

    Quantisation rounds half away from zero. Out-of-range values are clamped
    to [0, 255] unless ``spec.clamp`` is off, in which case they raise.
    """
    y, x = np.mgrid[0 : spec.height, 0 : spec.width].astype(np.float64)
    img = spec.primitives[0].render(x, y)
    for prim in spec.primitives[1:]:
        img = np.maximum(img, prim.render(x, y))
    if spec.clamp:
        img = np.clip(img, 0.0, 255.0)
    elif img.min() < 0 or img.max() > 255:
        raise ValueError(f"synthetic intensities span [{img.min():g}, {img.max():g}], outside [0, 255]")
    if spec.quantize:
        return np.floor(img + 0.5).astype(np.uint8)
    return img


def cone_cylinder_composite(size: int = 256, quantize: bool = True) -> SyntheticSpec:
    """Three full-height cones beside a vertical half-cylinder ridge.

    Layout is fixed on a 256-pixel canvas and scaled to ``size``.
    """
    s = size / 256.0
    prims = (
        Cone(64 * s, 64 * s, 40 * s, 255),
        Cone(64 * s, 192 * s, 48 * s, 255),
        Cone(150 * s, 128 * s, 36 * s, 255),
        CylinderRidge("vertical", 208 * s, 36 * s, 255),
    )
    return SyntheticSpec(prims, size, size, quantize=quantize)


def singularity_mask(spec: SyntheticSpec, radius: float = 2.0) -> np.ndarray:
    """True within ``radius`` of cone apexes, cone rims and ridge edges."""
    y, x = np.mgrid[0 : spec.height, 0 : spec.width].astype(np.float64)
    mask = np.zeros((spec.height, spec.width), dtype=bool)
    for p in spec.primitives:
        if isinstance(p, Cone):
            r = np.hypot(x - p.cx, y - p.cy)
            mask |= (r <= radius) | (np.abs(r - p.radius) <= radius)
        elif isinstance(p, CylinderRidge):
            t = (x if p.orientation == "vertical" else y) - p.center
            mask |= np.abs(np.abs(t) - p.radius) <= radius
    return mask


_KINDS = {
    "cone": (Cone, (float, float, float, float)),
    "cylinder": (CylinderRidge, (str, float, float, float)),
    "ramp": (Ramp, (float, float, float)),
    "flat": (Flat, (float,)),
}


def parse_primitive(kind: str, value: str) -> Primitive:
    """``cone`` takes ``cx,cy,radius,peak``; ``cylinder`` takes
    ``orientation,center,radius,peak``; ``ramp`` takes ``a,b,c``; ``flat``
    takes ``level``."""
    try:
        cls, types = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown primitive kind {kind!r}") from None
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != len(types):
        raise ValueError(f"{kind} takes {len(types)} comma-separated values, got {value!r}")
    return cls(*(t(p) for t, p in zip(types, parts)))


def _parse_bool(v: str) -> bool:
    v = v.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def parse_spec_text(text: str) -> SyntheticSpec:
    """Parse ``key=value`` lines into a spec.

    Recognised keys: ``width``, ``height``, ``size`` (``WxH``),
    ``quantize``, ``clamp`` and one line per primitive (``cone``,
    ``cylinder``, ``ramp``, ``flat``). Blank lines and ``#`` comments are
    ignored.
    """
    opts: dict = {}
    prims = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in _KINDS:
            prims.append(parse_primitive(key, value))
        elif key in ("width", "height"):
            opts[key] = int(value)
        elif key == "size":
            opts["width"], opts["height"] = parse_size(value)
        elif key in ("quantize", "clamp"):
            opts[key] = _parse_bool(value)
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if "width" not in opts or "height" not in opts:
        raise ValueError("config must set width and height (or size)")
    return SyntheticSpec(tuple(prims), **opts)


def parse_size(text: str) -> tuple[int, int]:
    w, sep, h = text.lower().partition("x")
    if not sep:
        raise ValueError(f"size must look like WxH, got {text!r}")
    return int(w), int(h)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurvatureStats:
    mean_abs: float
    min: float
    max: float
    count: int

    def rows(self):
        return [("mean_abs", self.mean_abs), ("min", self.min), ("max", self.max), ("count", self.count)]


def curvature_stats(field: np.ndarray, region: str = "interior", mask: np.ndarray | None = None) -> CurvatureStats:
    """Mean absolute value, extremes and pixel count over a region.

    ``region="interior"`` drops the one-pixel border. Pixels where ``mask``
    is True are excluded as well.
    """
    field = np.asarray(field, dtype=np.float64)
    if field.ndim != 2:
        raise ValueError("expected a 2-D field")
    keep = np.ones(field.shape, dtype=bool)
    if region == "interior":
        keep[:, [0, -1]] = False
        keep[[0, -1], :] = False
    elif region != "full":
        raise ValueError(f"region must be 'interior' or 'full', got {region!r}")
    if mask is not None:
        keep &= ~np.asarray(mask, dtype=bool)
    vals = field[keep]
    if vals.size == 0:
        raise ValueError("statistics region is empty")
    return CurvatureStats(float(np.abs(vals).mean()), float(vals.min()), float(vals.max()), int(vals.size))
