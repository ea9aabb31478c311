"""Laguerre-Gaussian mode amplitudes, grid sampling and modal overlaps.

Conventions
-----------
* azimuthal factor ``exp(+i l phi)`` everywhere;
* spot size ``w(z) = w0 * sqrt(1 + (z / zR)**2)``;
* grids are square, centred on the beam axis and sampled at cell midpoints,
  so no sample sits on ``r = 0``.  Row index runs along ``y``, column index
  along ``x``, both increasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .oamstate import OAMSuperposition

MAX_CHARGE = 8


@dataclass(frozen=True)
class BeamParams:
    waist_w0: float = 1.0
    rayleigh_zR: float = 1.0
    wavenumber_k0: float = 2 * math.pi * 10

    def __post_init__(self):
        for name in ("waist_w0", "rayleigh_zR", "wavenumber_k0"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")

    def spot_size(self, z: float) -> float:
        return self.waist_w0 * math.sqrt(1.0 + (z / self.rayleigh_zR) ** 2)


@dataclass(frozen=True)
class ModeIndex:
    l: int
    p: int = 0

    def __post_init__(self):
        if int(self.l) != self.l or int(self.p) != self.p:
            raise TypeError("mode indices must be integers")
        if self.p != 0:
            raise ValueError("only p = 0 modes are supported")
        if abs(self.l) > MAX_CHARGE:
            raise ValueError(f"|l| must be <= {MAX_CHARGE}, got {self.l}")


@dataclass(frozen=True)
class GridSpec:
    n: int = 512
    extent: float = 6.0
    z: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 16 or self.n % 2:
            raise ValueError(f"n must be an even integer >= 16, got {self.n!r}")
        if not (math.isfinite(self.extent) and self.extent > 0):
            raise ValueError(f"extent must be > 0, got {self.extent!r}")
        if not math.isfinite(self.z):
            raise ValueError("z must be finite")

    def spacing(self, w0: float = 1.0) -> float:
        return 2.0 * self.extent * w0 / self.n

    def axis(self, w0: float = 1.0) -> np.ndarray:
        # half-integer offsets keep the axis exactly antisymmetric
        return (np.arange(self.n) - (self.n - 1) / 2.0) * self.spacing(w0)

    def mesh(self, w0: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(x, y)`` arrays of shape ``(n, n)``."""
        ax = self.axis(w0)
        return np.meshgrid(ax, ax, indexing="xy")

    def polar(self, w0: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
        x, y = self.mesh(w0)
        return np.hypot(x, y), np.arctan2(y, x)


@dataclass(frozen=True, eq=False)
class FieldGrid:
    values: np.ndarray
    grid: GridSpec
    beam: BeamParams

    def __post_init__(self):
        v = self.values
        if v.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"field shape {v.shape} does not match n={self.grid.n}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite samples")
        v.setflags(write=False)

    @property
    def cell_area(self) -> float:
        return self.grid.spacing(self.beam.waist_w0) ** 2


def assoc_laguerre(n: int, alpha: float, x):
    """Generalised Laguerre polynomial ``L_n^alpha(x)`` by three-term recurrence."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def _check_finite(**values):
    for name, v in values.items():
        if not np.all(np.isfinite(v)):
            raise ValueError(f"non-finite {name}")


def lg_amplitude(mode: ModeIndex | int, beam: BeamParams, r, phi, z: float = 0.0):
    """Normalised LG_p^l amplitude at cylindrical point(s) ``(r, phi, z)``.

    Accepts scalars or broadcastable arrays for ``r`` and ``phi``.
    """
    if not isinstance(mode, ModeIndex):
        mode = ModeIndex(mode)
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    _check_finite(r=r, phi=phi, z=z)
    if np.any(r < 0):
        raise ValueError("r must be non-negative")

    l, p = mode.l, mode.p
    al = abs(l)
    zr = beam.rayleigh_zR
    w = beam.spot_size(z)
    norm = math.sqrt(2.0 * math.factorial(p) / (math.pi * math.factorial(p + al))) / w
    rho = r * math.sqrt(2.0) / w
    envelope = rho**al * np.exp(-(r**2) / w**2) * assoc_laguerre(p, al, rho**2)
    curvature = beam.wavenumber_k0 * r**2 * z / (2.0 * (z**2 + zr**2))
    gouy = (2 * p + al + 1) * math.atan2(z, zr)
    out = norm * envelope * np.exp(1j * (curvature - gouy + l * phi))
    return out[()] if out.ndim == 0 else out


def _azimuthal(l: int, phi: np.ndarray) -> np.ndarray:
    lphi = l * phi
    return np.cos(lphi) + 1j * np.sin(lphi)


def sample_field(state: OAMSuperposition, beam: BeamParams, grid: GridSpec) -> FieldGrid:
    """Sum ``c_l * LG_0^l`` over the state's charges at every grid point."""
    if len(state) == 0:
        raise ValueError("cannot sample an empty state")
    r, phi = grid.polar(beam.waist_w0)
    radial_cache: dict[int, np.ndarray] = {}
    field = np.zeros((grid.n, grid.n), dtype=complex)
    for l, c in state.items():
        ModeIndex(l)
        al = abs(l)
        if al not in radial_cache:
            radial_cache[al] = lg_amplitude(ModeIndex(al), beam, r, 0.0, grid.z)
        field += c * (radial_cache[al] * _azimuthal(l, phi))
    return FieldGrid(field, grid, beam)


def _check_compatible(a: FieldGrid, b: FieldGrid):
    if a.grid != b.grid or a.beam.waist_w0 != b.beam.waist_w0:
        raise ValueError("fields sampled on different grids")


def overlap(a: FieldGrid, b: FieldGrid) -> complex:
    """Discrete inner product ``sum(conj(a) * b) * dx * dy``."""
    _check_compatible(a, b)
    return complex(np.vdot(a.values, b.values) * a.cell_area)


def project_onto_lg(field: FieldGrid, l: int, beam: BeamParams | None = None) -> complex:
    """Amplitude of ``field`` in the normalised LG_0^l mode on the same grid."""
    beam = field.beam if beam is None else beam
    mode = sample_field(OAMSuperposition.basis(l), beam, field.grid)
    return overlap(mode, field)
