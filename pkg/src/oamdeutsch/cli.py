"""Command-line entry point.

Exit codes: 0 success, 1 validation or wiring failure, 2 parse or IO failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .config import IMAGE_FORMATS, RunConfig, parse_config
from .deutsch import DeutschOptions, oracle_classify, run_deutsch, testing_state
from .errors import ConfigError, OAMError, WiringError
from .gates import GATE_KINDS, build_gate, truth_table, validate_setup
from .lgmode import project_onto_lg, sample_field
from .oamstate import parse_state_spec
from .render import pattern_stats, render_state, write_image

OUT_ENV = "OAMDEUTSCH_OUT"

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> str:
    return f"{x:.12f}"


def _num(x: float) -> float:
    # 12 decimals keeps records byte-stable across platforms; +0.0 drops "-0.0"
    return float(f"{x:.12f}") + 0.0


def _cnum(z: complex) -> dict:
    return {"re": _num(z.real), "im": _num(z.imag)}


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Fail(EXIT_IO, f"cannot read config {path!r}: {exc}") from None
    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        raise _Fail(EXIT_IO, f"{path}: {exc}") from None
    for note in cfg.warnings:
        print(f"warning: {path}: {note}", file=sys.stderr)
    return cfg


def resolve_out_dir(cfg: RunConfig, flag: str | None) -> Path:
    if flag:
        return Path(flag)
    return Path(os.environ.get(OUT_ENV) or cfg.output_dir)


def _state(spec: str):
    try:
        return parse_state_spec(spec).normalize()
    except (ValueError, TypeError) as exc:
        raise _Fail(EXIT_IO, f"bad --state: {exc}") from None


def _stats_dict(stats) -> dict:
    return {
        "anisotropy": _num(stats.anisotropy),
        "azimuth_of_max": _num(stats.azimuth_of_max),
        "center_intensity_ratio": _num(stats.center_intensity_ratio),
        "class": stats.classify(),
        "ring_radius": _num(stats.ring_radius),
    }


def result_record(result, images=(), stats=None) -> dict:
    """Stable JSON-ready record of a run."""
    stages = {}
    for name in ("psi1", "psi2", "psi3"):
        snap = result.stage(name)
        stages[name] = {
            "global_sign": snap.global_sign,
            "logical": [[_cnum(a) for a in row] for row in snap.logical],
            "physical": [{"control_l": lc, "target_l": lt, **_cnum(a)}
                         for (lc, lt), a in snap.physical.amplitudes],
        }
    testing = {}
    for name in ("psi2", "psi3"):
        testing[name] = [{"l": l, **_cnum(c)} for l, c in testing_state(result, name).items()]
    record = {
        "event_probability": _num(result.event_probability),
        "gate": result.kind,
        "global_sign": result.global_sign,
        "images": list(images),
        "oracle_verdict": oracle_classify(result.kind),
        "p0": _num(result.p0),
        "p0_scaled": _num(result.p0_scaled),
        "p1": _num(result.p1),
        "p1_scaled": _num(result.p1_scaled),
        "stages": stages,
        "testing_states": testing,
        "verdict": result.verdict,
        "warnings": list(result.warnings),
    }
    if stats is not None:
        record["pattern_stats"] = {k: _stats_dict(v) for k, v in stats.items()}
    return record


def dump_record(record: dict) -> str:
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


def cmd_gate_table(kind: str, out=None) -> int:
    out = out or sys.stdout
    setup = build_gate(kind)
    try:
        rows = truth_table(setup)
    except (WiringError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(f"gate {setup.kind}", file=out)
    print("c t -> t_out", file=out)
    for c, t, t_out in rows:
        print(f"{c}{t} -> {t_out}", file=out)
    problems = validate_setup(setup)
    if problems:
        for p in problems:
            print(f"violation: {p}", file=out)
        return EXIT_INVALID
    print("validation: ok", file=out)
    return EXIT_OK


def cmd_run(cfg: RunConfig, gate: str | None = None, out_dir: str | None = None,
            out=None) -> int:
    out = out or sys.stdout
    kind = (gate or cfg.gate).upper().replace("-", "")
    if kind not in GATE_KINDS:
        raise _Fail(EXIT_IO, f"unknown gate {gate!r}")
    options = DeutschOptions(chi3=cfg.chi3, efficiency=cfg.efficiency,
                             target_one_l=cfg.target_one_l)
    try:
        result = run_deutsch(kind, options)
    except WiringError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    target = resolve_out_dir(cfg, out_dir)
    images, stats = [], {}
    try:
        target.mkdir(parents=True, exist_ok=True)
        for stage in ("psi2", "psi3"):
            grid = render_state(testing_state(result, stage), cfg.beam, cfg.grid)
            stats[stage] = pattern_stats(grid)
            for fmt_ in cfg.formats:
                name = f"{stage}_testing.{fmt_}"
                write_image(grid, target / name, fmt_)
                images.append(name)
        record = result_record(result, images, stats)
        (target / "result.json").write_text(dump_record(record), encoding="utf-8")
    except OSError as exc:
        raise _Fail(EXIT_IO, str(exc)) from None

    print(f"gate {result.kind}", file=out)
    print(f"verdict {result.verdict}", file=out)
    print(f"p0 {fmt(result.p0)}", file=out)
    print(f"p1 {fmt(result.p1)}", file=out)
    print(f"global_sign {result.global_sign:+d}", file=out)
    print(f"record {target / 'result.json'}", file=out)
    return EXIT_OK


def cmd_render(spec: str, cfg: RunConfig, fmt_: str = "pgm", path: str | None = None,
               out=None) -> int:
    out = out or sys.stdout
    state = _state(spec)
    try:
        grid = render_state(state, cfg.beam, cfg.grid)
    except ValueError as exc:
        raise _Fail(EXIT_IO, str(exc)) from None
    stats = pattern_stats(grid)
    dest = Path(path) if path else resolve_out_dir(cfg, None) / f"render.{fmt_}"
    try:
        dest.parent.mkdir(parents=True, exist_ok=True)
        write_image(grid, dest, fmt_)
    except OSError as exc:
        raise _Fail(EXIT_IO, str(exc)) from None
    print(f"wrote {dest}", file=out)
    print(f"class {stats.classify()}", file=out)
    print(f"center_intensity_ratio {fmt(stats.center_intensity_ratio)}", file=out)
    print(f"ring_radius {fmt(stats.ring_radius)}", file=out)
    print(f"azimuth_of_max {fmt(stats.azimuth_of_max)}", file=out)
    print(f"anisotropy {fmt(stats.anisotropy)}", file=out)
    return EXIT_OK


def cmd_project(spec: str, l: int, cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    state = _state(spec)
    try:
        field = sample_field(state, cfg.beam, cfg.grid)
        amp = project_onto_lg(field, l)
    except ValueError as exc:
        raise _Fail(EXIT_IO, str(exc)) from None
    print(fmt(abs(amp) ** 2), file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oamdeutsch",
        description="Deutsch's algorithm on OAM photons through four-wave mixing.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gate-table", help="print a gate's truth table and routing check")
    p.add_argument("kind", choices=GATE_KINDS)

    p = sub.add_parser("run", help="run the full algorithm and write a result record")
    p.add_argument("--config", required=True, metavar="PATH")
    p.add_argument("--gate", choices=GATE_KINDS)
    p.add_argument("--out", metavar="DIR", help=f"output directory (overrides ${OUT_ENV})")

    p = sub.add_parser("render", help="render a state 'l:re:im,...' to an image")
    p.add_argument("--state", required=True)
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--format", choices=IMAGE_FORMATS, default="pgm")
    p.add_argument("--output", metavar="FILE")

    p = sub.add_parser("project", help="print |<LG_l|state>|^2 on the sampling grid")
    p.add_argument("--state", required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--config", metavar="PATH")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    try:
        if args.command == "gate-table":
            return cmd_gate_table(args.kind)
        if args.command == "run":
            return cmd_run(load_config(args.config), args.gate, args.out)
        cfg = load_config(args.config)
        if args.command == "render":
            return cmd_render(args.state, cfg, args.format, args.output)
        return cmd_project(args.state, args.l, cfg)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OAMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
