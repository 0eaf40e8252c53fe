"""Binary PGM images, raw float64 field dumps and stats CSV."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass

import numpy as np

FIELD_MAGIC = b"WGCFIELD"


class ImageFormatError(ValueError):
    """Malformed or unsupported file."""


@dataclass(frozen=True)
class VisualizationParams:
    offset: float = 128.0
    gain: float = 20.0


_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _header_tokens(data: bytes, count: int):
    """Read ``count`` whitespace-separated header tokens, skipping comments.

    Returns the tokens and the offset just past the single whitespace byte
    that terminates the last one.
    """
    pos = 0
    tokens = []
    for _ in range(count):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise ImageFormatError("truncated PGM header")
        tokens.append(m.group(1))
        pos = m.end()
    if pos >= len(data) or data[pos : pos + 1] not in b" \t\r\n":
        raise ImageFormatError("PGM header must end with a single whitespace byte")
    return tokens, pos + 1


def read_image(path) -> np.ndarray:
    """Read a binary (P5) 8-bit PGM into a uint8 array of shape (height, width)."""
    with open(path, "rb") as f:
        data = f.read()
    if not data.startswith(b"P5"):
        raise ImageFormatError(f"{path}: not a binary PGM (P5) file")
    tokens, offset = _header_tokens(data, 4)
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise ImageFormatError(f"{path}: non-numeric PGM header field") from None
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: bad image size {width}x{height}")
    if not 0 < maxval < 65536:
        raise ImageFormatError(f"{path}: bad maxval {maxval}")
    if maxval > 255:
        raise ImageFormatError(f"{path}: 16-bit PGM (maxval {maxval}) is not supported")
    n = width * height
    payload = data[offset : offset + n]
    if len(payload) < n:
        raise ImageFormatError(f"{path}: expected {n} pixel bytes, found {len(payload)}")
    img = np.frombuffer(payload, dtype=np.uint8).reshape(height, width).copy()
    if img.max() > maxval:
        raise ImageFormatError(f"{path}: pixel value exceeds maxval {maxval}")
    return img


def write_image(img, path) -> None:
    img = np.asarray(img)
    if img.ndim != 2 or img.size == 0:
        raise ValueError(f"expected a non-empty 2-D image, got shape {img.shape}")
    if img.dtype != np.uint8:
        if img.min() < 0 or img.max() > 255 or not np.all(np.floor(img) == img):
            raise ValueError("image values must be integers in [0, 255]")
        img = img.astype(np.uint8)
    height, width = img.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (width, height))
        f.write(np.ascontiguousarray(img).tobytes())


def visualize_curvature(field, params: VisualizationParams = VisualizationParams()) -> np.ndarray:
    """Map a curvature field to 8 bits via ``offset + gain * value``.

    Rounds half away from zero, then clamps to [0, 255].
    """
    v = params.offset + params.gain * np.asarray(field, dtype=np.float64)
    v = np.sign(v) * np.floor(np.abs(v) + 0.5)
    return np.clip(v, 0, 255).astype(np.uint8)


def write_field(field, path) -> None:
    """Dump a float64 field: ``WGCFIELD\\n<width> <height>\\n`` then LE doubles."""
    field = np.asarray(field, dtype=np.float64)
    if field.ndim != 2:
        raise ValueError(f"expected a 2-D field, got shape {field.shape}")
    height, width = field.shape
    with open(path, "wb") as f:
        f.write(FIELD_MAGIC + b"\n%d %d\n" % (width, height))
        f.write(np.ascontiguousarray(field, dtype="<f8").tobytes())


def read_field(path) -> np.ndarray:
    with open(path, "rb") as f:
        data = f.read()
    first, _, rest = data.partition(b"\n")
    if first != FIELD_MAGIC:
        raise ImageFormatError(f"{path}: not a field dump")
    dims, sep, payload = rest.partition(b"\n")
    if not sep:
        raise ImageFormatError(f"{path}: truncated field header")
    try:
        width, height = (int(t) for t in dims.split())
    except ValueError:
        raise ImageFormatError(f"{path}: bad field dimensions {dims!r}") from None
    if width < 0 or height < 0:
        raise ImageFormatError(f"{path}: bad field dimensions {dims!r}")
    if len(payload) != width * height * 8:
        raise ImageFormatError(
            f"{path}: header says {width}x{height} ({width * height * 8} bytes), payload has {len(payload)}"
        )
    return np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(height, width)


def stats_csv(rows) -> str:
    """Render ``(metric, value)`` pairs as CSV with a ``metric,value`` header."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric", "value"])
    for name, value in rows:
        w.writerow([name, repr(value) if isinstance(value, float) else value])
    return buf.getvalue()


def write_stats(rows, path) -> None:
    with open(path, "w", newline="") as f:
        f.write(stats_csv(rows))
