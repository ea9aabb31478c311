"""Intensity maps of OAM states and the statistics that tell the
Gaussian, doughnut and two-lobe interference patterns apart.

Image files: 16-bit big-endian binary PGM (``P5``) with the linear scale
maximum recorded in a comment line, and plain row-major CSV.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .lgmode import BeamParams, GridSpec, sample_field
from .oamstate import OAMSuperposition

AZIMUTHAL_BINS = 64
PGM_MAXVAL = 65535

GAUSSIAN_CENTER_MIN = 0.9
DOUGHNUT_CENTER_MAX = 0.05
DOUGHNUT_ANISOTROPY_MAX = 0.1
INTERFERENCE_ANISOTROPY_MIN = 0.5


@dataclass(frozen=True, eq=False)
class RealGrid:
    values: np.ndarray
    grid: GridSpec | None = None
    beam: BeamParams = BeamParams()

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {v.shape}")
        if self.grid is not None and v.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"values shape {v.shape} does not match n={self.grid.n}")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("intensity values must be finite and non-negative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def max(self) -> float:
        return float(self.values.max())


@dataclass(frozen=True)
class PatternStats:
    center_intensity_ratio: float
    ring_radius: float
    azimuth_of_max: float
    anisotropy: float

    def classify(self) -> str:
        if self.anisotropy > INTERFERENCE_ANISOTROPY_MIN:
            return "interference"
        if self.center_intensity_ratio > GAUSSIAN_CENTER_MIN:
            return "gaussian"
        if (self.center_intensity_ratio < DOUGHNUT_CENTER_MAX
                and self.anisotropy < DOUGHNUT_ANISOTROPY_MAX):
            return "doughnut"
        return "unclassified"


def render_state(state: OAMSuperposition, beam: BeamParams = BeamParams(),
                 grid: GridSpec = GridSpec()) -> RealGrid:
    field = sample_field(state, beam, grid).values
    return RealGrid(field.real**2 + field.imag**2, grid, beam)


def _polar_resample(grid: RealGrid, radii: np.ndarray) -> np.ndarray:
    """Intensity on a ``(len(radii), AZIMUTHAL_BINS)`` polar lattice."""
    n = grid.grid.n
    dx = grid.grid.spacing(grid.beam.waist_w0)
    phis = -math.pi + (np.arange(AZIMUTHAL_BINS) + 0.5) * (2 * math.pi / AZIMUTHAL_BINS)
    rr, pp = np.meshgrid(radii, phis, indexing="ij")
    # pixel index of coordinate x is x / dx + (n - 1) / 2
    cols = rr * np.cos(pp) / dx + (n - 1) / 2.0
    rows = rr * np.sin(pp) / dx + (n - 1) / 2.0
    out = ndimage.map_coordinates(grid.values, [rows, cols], order=3, mode="nearest")
    return np.clip(out, 0.0, None)


def _refine_peak(xs: np.ndarray, ys: np.ndarray) -> float:
    k = int(np.argmax(ys))
    if k == 0 or k == len(ys) - 1:
        return float(xs[k])
    y0, y1, y2 = ys[k - 1], ys[k], ys[k + 1]
    denom = y0 - 2 * y1 + y2
    if denom == 0:
        return float(xs[k])
    step = xs[1] - xs[0]
    return float(xs[k] + 0.5 * (y0 - y2) / denom * step)


def pattern_stats(grid: RealGrid) -> PatternStats:
    """Summary numbers for one intensity map (lengths in waist units).

    ``ring_radius`` is the radius where the brightest of the 64 azimuthal
    bins peaks; ``anisotropy`` compares those bins on that circle.
    """
    if grid.grid is None:
        raise ValueError("pattern statistics need the grid geometry")
    vals = grid.values
    peak = vals.max()
    if peak <= 0:
        raise ValueError("all-zero intensity grid")
    n = grid.grid.n
    w0 = grid.beam.waist_w0
    h = n // 2
    center = vals[h - 1:h + 1, h - 1:h + 1].mean() / peak

    dx = grid.grid.spacing(w0)
    r_max = 0.95 * grid.grid.extent * w0
    radii = np.arange(0.0, r_max, dx / 8)
    polar = _polar_resample(grid, radii)
    ring = _refine_peak(radii, polar.max(axis=1))

    on_ring = _polar_resample(grid, np.array([ring]))[0]
    top = on_ring.max()
    anisotropy = 0.0 if top <= 0 else 1.0 - on_ring.min() / top

    x, y = grid.grid.mesh(w0)
    mx, my = float(np.sum(vals * x)), float(np.sum(vals * y))
    # a centred (rotationally symmetric) pattern has no preferred direction
    if math.hypot(mx, my) <= 1e-9 * float(vals.sum()) * dx:
        azimuth = 0.0
    else:
        azimuth = math.atan2(my, mx)
        if azimuth <= -math.pi:
            azimuth = math.pi

    return PatternStats(float(min(1.0, center)), ring / w0, azimuth,
                        float(min(1.0, max(0.0, anisotropy))))


def quantize(grid: RealGrid) -> np.ndarray:
    m = grid.max
    if m == 0:
        return np.zeros(grid.values.shape, dtype=np.uint16)
    return np.rint(grid.values / m * PGM_MAXVAL).astype(np.uint16)


def write_pgm(grid: RealGrid, path) -> None:
    pixels = quantize(grid)
    rows, cols = pixels.shape
    header = f"P5\n# scale_max {grid.max!r}\n{cols} {rows}\n{PGM_MAXVAL}\n".encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(pixels.astype(">u2").tobytes())
    except OSError as exc:
        raise OSError(f"cannot write PGM {os.fspath(path)!r}: {exc}") from exc


_PGM_HEADER = re.compile(
    rb"P5\s*\n(?:#\s*scale_max\s+(\S+)\s*\n)?(\d+)\s+(\d+)\s*\n(\d+)\n")


def read_pgm(path) -> tuple[np.ndarray, float | None]:
    """Return ``(uint16 pixels, recorded scale max)``."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read PGM {os.fspath(path)!r}: {exc}") from exc
    m = _PGM_HEADER.match(data)
    if not m:
        raise ValueError(f"{os.fspath(path)!r} is not a 16-bit P5 PGM written here")
    scale = float(m.group(1)) if m.group(1) else None
    cols, rows, maxval = int(m.group(2)), int(m.group(3)), int(m.group(4))
    if maxval != PGM_MAXVAL:
        raise ValueError(f"unsupported PGM maxval {maxval}")
    body = data[m.end():]
    if len(body) != 2 * rows * cols:
        raise ValueError("truncated PGM pixel data")
    pixels = np.frombuffer(body, dtype=">u2").reshape(rows, cols).astype(np.uint16)
    return pixels, scale


def format_csv(values: np.ndarray) -> str:
    return "".join(",".join(format(float(v), ".17g") for v in row) + "\n" for row in values)


def write_csv(grid: RealGrid, path) -> None:
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(format_csv(grid.values))
    except OSError as exc:
        raise OSError(f"cannot write CSV {os.fspath(path)!r}: {exc}") from exc


def read_csv(path) -> np.ndarray:
    try:
        with open(path, encoding="ascii") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read CSV {os.fspath(path)!r}: {exc}") from exc
    return np.array([[float(v) for v in line.split(",")] for line in lines if line])


def write_image(grid: RealGrid, path, fmt: str) -> None:
    if fmt == "pgm":
        write_pgm(grid, path)
    elif fmt == "csv":
        write_csv(grid, path)
    else:
        raise ValueError(f"unknown image format {fmt!r}; expected pgm or csv")
