"""Precomputed corner-angle tables for 8-bit images with unit pixel spacing.

A table is indexed by ``(d_i + 255, d_next + 255)``. The partial variant
keeps only the band where ``|d_i| < T`` or ``|d_next| < T`` and replaces the
rest by the limiting angle of the cosine law: 0 for same-sign differences,
pi for opposite signs.

Dump layout (little endian)::

    8 bytes   magic b"WGCANGLE"
    uint32    variant (0 = full, 1 = partial)
    uint32    threshold T (0 for full)
    float64[] full: 511*511 row-major table
              partial: (2T-1)*511 row band (d_i = -T+1 .. T-1, all d_next),
                       then (511-(2T-1))*(2T-1) column band
                       (d_i = -255 .. -T, T .. 255; d_next = -T+1 .. T-1)
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from wgcurv.core import corner_angle

DMAX = 255
SIDE = 2 * DMAX + 1  # 511
MAGIC = b"WGCANGLE"
_HEADER = struct.Struct("<8sII")
VARIANT_FULL = 0
VARIANT_PARTIAL = 1


def partial_entry_count(threshold: int) -> int:
    w = 2 * threshold - 1
    return 2 * SIDE * w - w * w


@dataclass(frozen=True, eq=False)
class AngleLut:
    """Angle table, either full (``threshold is None``) or banded.

    ``literal_limits`` swaps the two constant approximations of the partial
    table (pi for same sign, 0 for opposite sign) for fidelity experiments.
    """

    threshold: int | None
    table: np.ndarray | None = None  # full: (511, 511)
    row_band: np.ndarray | None = None  # partial: (2T-1, 511)
    col_band: np.ndarray | None = None  # partial: (511-(2T-1), 2T-1)
    literal_limits: bool = False

    @property
    def is_full(self) -> bool:
        return self.threshold is None

    @property
    def variant(self) -> str:
        return "full" if self.is_full else "partial"

    @property
    def entry_count(self) -> int:
        if self.is_full:
            return self.table.size
        return self.row_band.size + self.col_band.size

    @property
    def nbytes(self) -> int:
        if self.is_full:
            return self.table.nbytes
        return self.row_band.nbytes + self.col_band.nbytes

    def stored(self, a: int, b: int) -> bool:
        return self.is_full or abs(a) < self.threshold or abs(b) < self.threshold

    def lookup(self, d_i, d_next):
        """Vectorised lookup; inputs are integer arrays in [-255, 255]."""
        a, b = np.broadcast_arrays(_as_int(d_i), _as_int(d_next))
        if self.is_full:
            return self.table.ravel().take((a + DMAX) * SIDE + (b + DMAX))

        # one gather from [row band | column band | same-sign limit | opposite-sign limit]
        T = self.threshold
        w = 2 * T - 1
        n_rows = self.row_band.size
        n_band = n_rows + self.col_band.size
        idx_rows = (a + (T - 1)) * SIDE + (b + DMAX)
        col_row = a + DMAX - w * (a >= T)
        idx_cols = n_rows + col_row * w + (b + (T - 1))
        idx_rest = n_band + ((a > 0) != (b > 0))
        idx = np.where(np.abs(a) < T, idx_rows, np.where(np.abs(b) < T, idx_cols, idx_rest))
        return self._flat().take(idx)

    def _flat(self) -> np.ndarray:
        flat = self.__dict__.get("_flat_cache")
        if flat is None:
            limits = [math.pi, 0.0] if self.literal_limits else [0.0, math.pi]
            flat = np.concatenate([self.row_band.ravel(), self.col_band.ravel(), limits])
            object.__setattr__(self, "_flat_cache", flat)
        return flat


def _as_int(v):
    v = np.asarray(v)
    return v if v.dtype.kind in "iu" and v.dtype.itemsize >= 4 else v.astype(np.int64)


def _check_range(*values):
    arr = np.concatenate([np.ravel(np.asarray(v)) for v in values])
    if arr.size and (arr.min() < -DMAX or arr.max() > DMAX):
        raise ValueError(f"differences must lie in [-{DMAX}, {DMAX}]")
    if arr.dtype.kind == "f" and not np.all(np.floor(arr) == arr):
        raise ValueError("lookup table differences must be integers")


def build_full_lut() -> AngleLut:
    d = np.arange(-DMAX, DMAX + 1, dtype=np.float64)
    table = corner_angle(d[:, None], d[None, :], 1.0)
    table.setflags(write=False)
    return AngleLut(threshold=None, table=table)


def build_partial_lut(threshold: int = 31, *, literal_limits: bool = False) -> AngleLut:
    if isinstance(threshold, bool) or int(threshold) != threshold or not 1 <= threshold <= DMAX:
        raise ValueError(f"threshold must be an integer in [1, {DMAX}], got {threshold!r}")
    T = int(threshold)
    d = np.arange(-DMAX, DMAX + 1, dtype=np.float64)
    small = np.arange(-(T - 1), T, dtype=np.float64)
    large = d[np.abs(d) >= T]
    row_band = corner_angle(small[:, None], d[None, :], 1.0)
    col_band = corner_angle(large[:, None], small[None, :], 1.0)
    row_band.setflags(write=False)
    col_band.setflags(write=False)
    return AngleLut(threshold=T, row_band=row_band, col_band=col_band, literal_limits=literal_limits)


def lookup_angle(lut: AngleLut, d_i, d_next):
    """Angle for integer differences; scalars in, float out."""
    _check_range(d_i, d_next)
    res = lut.lookup(d_i, d_next)
    if np.ndim(res) == 0:
        return float(res)
    return res


def write_lut(lut: AngleLut, path) -> None:
    if lut.is_full:
        header = _HEADER.pack(MAGIC, VARIANT_FULL, 0)
        arrays = [lut.table]
    else:
        header = _HEADER.pack(MAGIC, VARIANT_PARTIAL, lut.threshold)
        arrays = [lut.row_band, lut.col_band]
    with open(path, "wb") as f:
        f.write(header)
        for arr in arrays:
            f.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def read_lut(path) -> AngleLut:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < _HEADER.size:
        raise ValueError("truncated LUT header")
    magic, variant, threshold = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"bad LUT magic {magic!r}")
    payload = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).astype(np.float64)
    if variant == VARIANT_FULL:
        if payload.size != SIDE * SIDE:
            raise ValueError(f"full LUT needs {SIDE * SIDE} entries, found {payload.size}")
        return AngleLut(threshold=None, table=payload.reshape(SIDE, SIDE))
    if variant == VARIANT_PARTIAL:
        if not 1 <= threshold <= DMAX:
            raise ValueError(f"bad threshold {threshold}")
        w = 2 * threshold - 1
        if payload.size != partial_entry_count(threshold):
            raise ValueError(
                f"partial LUT T={threshold} needs {partial_entry_count(threshold)} entries, found {payload.size}"
            )
        row_band = payload[: w * SIDE].reshape(w, SIDE)
        col_band = payload[w * SIDE :].reshape(SIDE - w, w)
        return AngleLut(threshold=threshold, row_band=row_band, col_band=col_band)
    raise ValueError(f"unknown LUT variant tag {variant}")
