"""Run configuration in a small ``key = value`` format with ``[section]`` headers.

Keys before the first header are global::

    gate = CNOT
    target_one_l = -1
    seed = 0

    [beam]
    w0 = 1
    zR = 1
    k0 = 62.83185307179586

    [grid]
    n = 512
    extent = 6
    z = 0

    [fwm]
    chi3 = 1
    efficiency = 1

    [output]
    dir = out
    formats = pgm, csv

Blank lines and lines starting with ``#`` or ``;`` are ignored.  A repeated
key keeps its last value and records a warning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .gates import GATE_KINDS
from .lgmode import BeamParams, GridSpec

IMAGE_FORMATS = ("pgm", "csv")

_KEYS = {
    "": ("gate", "target_one_l", "seed"),
    "beam": ("w0", "zR", "k0"),
    "grid": ("n", "extent", "z"),
    "fwm": ("chi3", "efficiency"),
    "output": ("dir", "formats"),
}


@dataclass(frozen=True)
class RunConfig:
    gate: str = "I"
    beam: BeamParams = BeamParams()
    grid: GridSpec = GridSpec()
    target_one_l: int | None = None
    chi3: complex = 1.0 + 0j
    efficiency: float = 1.0
    output_dir: str = "out"
    formats: tuple[str, ...] = ("pgm",)
    # reserved; the simulation is deterministic
    seed: int | None = None
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def to_text(self) -> str:
        lines = [f"gate = {self.gate}"]
        if self.target_one_l is not None:
            lines.append(f"target_one_l = {self.target_one_l}")
        if self.seed is not None:
            lines.append(f"seed = {self.seed}")
        chi3 = repr(self.chi3.real) if self.chi3.imag == 0 else repr(self.chi3)
        lines += [
            "", "[beam]",
            f"w0 = {self.beam.waist_w0!r}",
            f"zR = {self.beam.rayleigh_zR!r}",
            f"k0 = {self.beam.wavenumber_k0!r}",
            "", "[grid]",
            f"n = {self.grid.n}",
            f"extent = {self.grid.extent!r}",
            f"z = {self.grid.z!r}",
            "", "[fwm]",
            f"chi3 = {chi3}",
            f"efficiency = {self.efficiency!r}",
            "", "[output]",
            f"dir = {self.output_dir}",
            f"formats = {', '.join(self.formats)}",
        ]
        return "\n".join(lines) + "\n"


def _num(value: str, lineno: int, kind=float):
    try:
        if kind is int:
            return int(value)
        if kind is complex:
            out = complex(value.replace(" ", ""))
            if not (math.isfinite(out.real) and math.isfinite(out.imag)):
                raise ValueError
            return out
        out = float(value)
        if not math.isfinite(out):
            raise ValueError
        return out
    except ValueError:
        raise ConfigError(f"malformed number {value!r}", lineno) from None


def parse_config(text: str) -> RunConfig:
    section = ""
    seen: dict[tuple[str, str], tuple[str, int]] = {}
    notes: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {line!r}", lineno)
            section = line[1:-1].strip().lower()
            if section not in _KEYS or section == "":
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS[section]:
            where = f"[{section}]" if section else "top level"
            raise ConfigError(f"unknown key {key!r} in {where}", lineno)
        if (section, key) in seen:
            notes.append(f"line {lineno}: duplicate key {key!r} overrides line "
                         f"{seen[section, key][1]}")
        seen[section, key] = (value, lineno)

    def get(section, key):
        return seen.get((section, key), (None, None))

    cfg = RunConfig()

    value, ln = get("", "gate")
    if value is not None:
        gate = value.upper().replace("-", "")
        if gate not in GATE_KINDS:
            raise ConfigError(f"unknown gate {value!r}; expected one of {GATE_KINDS}", ln)
        cfg = replace(cfg, gate=gate)
    value, ln = get("", "target_one_l")
    if value is not None:
        t1 = _num(value, ln, int)
        if t1 not in (1, -1):
            raise ConfigError("target_one_l must be 1 or -1", ln)
        cfg = replace(cfg, target_one_l=t1)
    value, ln = get("", "seed")
    if value is not None:
        cfg = replace(cfg, seed=_num(value, ln, int))

    beam_args = {"waist_w0": cfg.beam.waist_w0, "rayleigh_zR": cfg.beam.rayleigh_zR,
                 "wavenumber_k0": cfg.beam.wavenumber_k0}
    for key, name in (("w0", "waist_w0"), ("zR", "rayleigh_zR"), ("k0", "wavenumber_k0")):
        value, ln = get("beam", key)
        if value is not None:
            beam_args[name] = _num(value, ln)
            if beam_args[name] <= 0:
                raise ConfigError(f"{key} must be > 0", ln)
    cfg = replace(cfg, beam=BeamParams(**beam_args))

    grid_args = {"n": cfg.grid.n, "extent": cfg.grid.extent, "z": cfg.grid.z}
    for key, kind in (("n", int), ("extent", float), ("z", float)):
        value, ln = get("grid", key)
        if value is not None:
            grid_args[key] = _num(value, ln, kind)
    try:
        grid = GridSpec(**grid_args)
    except ValueError as exc:
        lines = [get("grid", k)[1] for k in ("n", "extent", "z") if get("grid", k)[1]]
        raise ConfigError(str(exc), max(lines) if lines else None) from None
    cfg = replace(cfg, grid=grid)

    value, ln = get("fwm", "chi3")
    if value is not None:
        cfg = replace(cfg, chi3=_num(value, ln, complex))
    value, ln = get("fwm", "efficiency")
    if value is not None:
        eff = _num(value, ln)
        if not 0.0 < eff <= 1.0:
            raise ConfigError(f"efficiency out of (0,1]: {value}", ln)
        cfg = replace(cfg, efficiency=eff)

    value, ln = get("output", "dir")
    if value is not None:
        if not value:
            raise ConfigError("output dir must not be empty", ln)
        cfg = replace(cfg, output_dir=value)
    value, ln = get("output", "formats")
    if value is not None:
        formats = tuple(f.strip().lower() for f in value.split(",") if f.strip())
        bad = [f for f in formats if f not in IMAGE_FORMATS]
        if bad or not formats:
            raise ConfigError(f"unknown image format(s) {bad or value!r}", ln)
        cfg = replace(cfg, formats=formats)

    return replace(cfg, warnings=tuple(notes))
