"""Exit criteria for the package; each test reports one PASS/FAIL line."""

import cmath
import itertools
import math
import time

import numpy as np
import pytest

from oamdeutsch.cli import main
from oamdeutsch.deutsch import (BALANCED, CONSTANT, DeutschOptions, oracle_classify,
                                run_deutsch, testing_state)
from oamdeutsch.fwm import FWMConfig, fwm_amplitudes, fwm_transform, signal_l
from oamdeutsch.gates import apply_gate, build_gate, gate_event
from oamdeutsch.lgmode import BeamParams, GridSpec, overlap, project_onto_lg, sample_field
from oamdeutsch.oamstate import OAMSuperposition, encode_logical, fidelity, LogicalConvention
from oamdeutsch.render import (AZIMUTHAL_BINS, RealGrid, pattern_stats, quantize, read_csv,
                               read_pgm, render_state, write_csv, write_pgm)

KINDS = ("I", "NOT", "CNOT", "ZCNOT")
FUNCTIONS = {"I": lambda c: 0, "NOT": lambda c: 1, "CNOT": lambda c: c, "ZCNOT": lambda c: 1 - c}
BIN = 2 * math.pi / AZIMUTHAL_BINS
S = 1 / math.sqrt(2)


def wrap(a):
    return (a + math.pi) % (2 * math.pi) - math.pi


def test_01_truth_tables(criterion):
    with criterion(1, "16/16 gate truth-table cases, probability 1 within 1e-9, < 1 s"):
        start = time.perf_counter()
        cases = 0
        for kind in KINDS:
            setup = build_gate(kind)
            conv = setup.target_convention
            for c, t in itertools.product((0, 1), repeat=2):
                out = apply_gate(setup, encode_logical(c, conv, "control"),
                                 encode_logical(t, conv, "target"))
                (l,) = out.charges
                assert (0 if l == 0 else 1) == t ^ FUNCTIONS[kind](c), (kind, c, t)
                assert abs(abs(out[l]) ** 2 - 1) <= 1e-9
                cases += 1
        assert cases == 16
        assert time.perf_counter() - start < 1.0


def test_02_cnot_superposition_sweep(criterion):
    with criterion(2, "C-NOT on 17-point Bloch sweep, fidelity >= 1 - 1e-12"):
        setup = build_gate("CNOT")
        conv = LogicalConvention()
        for k in range(17):
            theta = 2 * math.pi * k / 16
            a, b = math.cos(theta / 2), math.sin(theta / 2)
            target = OAMSuperposition({0: a, -1: b})
            out0 = apply_gate(setup, encode_logical(0, conv, "control"), target)
            out1 = apply_gate(setup, encode_logical(1, conv, "control"), target)
            assert fidelity(out0, OAMSuperposition({0: a, -1: b})) >= 1 - 1e-12
            assert fidelity(out1, OAMSuperposition({1: a, 0: b})) >= 1 - 1e-12


def test_03_deutsch_output_states(criterion):
    with criterion(3, "Deutsch verdicts, winning p = 1, signs (+,-,+,-), psi3 target factor, oracle match"):
        minus = np.array([S, -S])
        signs = []
        for kind in KINDS:
            r = run_deutsch(kind)
            expected = CONSTANT if kind in ("I", "NOT") else BALANCED
            assert r.verdict == expected == oracle_classify(kind)
            assert abs(max(r.p0, r.p1) - 1) <= 1e-9
            assert abs(r.p0 + r.p1 - 1) <= 1e-9
            assert abs(np.vdot(minus, r.psi3.target_factor)) ** 2 >= 1 - 1e-12
            signs.append(r.global_sign)
        assert signs == [1, -1, 1, -1]


def test_04_lg_numerics(criterion):
    with criterion(4, "LG self-overlap 1 +- 1e-6, cross-overlap < 1e-6, n=512, z in {0, zR}, < 30 s"):
        start = time.perf_counter()
        beam = BeamParams()
        for z in (0.0, beam.rayleigh_zR):
            grid = GridSpec(n=512, extent=6.0, z=z)
            fields = {l: sample_field(OAMSuperposition({l: 1}), beam, grid) for l in range(-2, 3)}
            for l, m in itertools.product(fields, repeat=2):
                ov = overlap(fields[l], fields[m])
                if l == m:
                    assert abs(ov - 1) <= 1e-6
                else:
                    assert abs(ov) < 1e-6
        assert time.perf_counter() - start < 30.0


def test_05_pattern_statistics(criterion):
    with criterion(5, "pattern stats: centre ratios, ring w/sqrt2 +- 1%, psi2 lobes pi apart, psi3 projection >= 0.999"):
        beam, grid = BeamParams(), GridSpec()
        gauss = pattern_stats(render_state(OAMSuperposition({0: 1}), beam, grid))
        assert gauss.center_intensity_ratio > 0.99
        for l in (1, -1):
            ring = pattern_stats(render_state(OAMSuperposition({l: 1}), beam, grid))
            assert ring.center_intensity_ratio < 0.01
            assert abs(ring.ring_radius - beam.waist_w0 / math.sqrt(2)) <= 0.01 / math.sqrt(2)

        results = {k: run_deutsch(k) for k in KINDS}
        az = {k: pattern_stats(render_state(testing_state(r, "psi2"), beam, grid)).azimuth_of_max
              for k, r in results.items()}
        for c, b in itertools.product(("I", "NOT"), ("CNOT", "ZCNOT")):
            assert abs(abs(wrap(az[c] - az[b])) - math.pi) <= 2 * BIN

        for kind, r in results.items():
            field = sample_field(testing_state(r, "psi3"), beam, grid)
            correct_l = 0 if r.verdict == CONSTANT else 1
            assert abs(project_onto_lg(field, correct_l)) ** 2 >= 0.999


def test_06_fwm_properties(criterion):
    with criterion(6, "FWM charge conservation on 125 triples; P2 linear, P3 antilinear to 1e-12"):
        triples = 0
        for l1, l2, l3 in itertools.product(range(-2, 3), repeat=3):
            cfg = FWMConfig(pump1_state=OAMSuperposition({l1: 1}, role="pump"))
            out = fwm_transform(cfg, OAMSuperposition({l2: 1}), OAMSuperposition({l3: 1}))
            assert out.signal.charges == (l1 + l2 - l3,) == (signal_l(l1, l2, l3),)
            triples += 1
        assert triples == 125

        rng = np.random.default_rng(20240611)

        def random_state():
            ls = rng.choice(np.arange(-2, 3), size=3, replace=False)
            return OAMSuperposition({int(l): complex(*rng.normal(size=2)) for l in ls})

        def close(x, y):
            x, y = x.coefficients, y.coefficients
            return all(abs(x.get(l, 0) - y.get(l, 0)) <= 1e-12 for l in set(x) | set(y))

        for _ in range(50):
            cfg = FWMConfig(chi3=complex(*rng.normal(size=2)),
                            pump1_state=OAMSuperposition({int(rng.integers(-2, 3)): 1}, role="pump"))
            u, v, p3 = random_state(), random_state(), random_state()
            a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
            assert close(fwm_amplitudes(cfg, u * a + v * b, p3),
                         fwm_amplitudes(cfg, u, p3) * a + fwm_amplitudes(cfg, v, p3) * b)
            ph = cmath.exp(1j * rng.uniform(-math.pi, math.pi))
            assert close(fwm_amplitudes(cfg, u, p3 * ph),
                         fwm_amplitudes(cfg, u, p3) * ph.conjugate())


def test_07_efficiency_substitute(criterion):
    with criterion(7, "efficiency rescales event probability linearly; verdicts, phases, stats unchanged"):
        beam, grid = BeamParams(), GridSpec(n=256)
        for kind in KINDS:
            base = run_deutsch(kind)
            base_stats = [pattern_stats(render_state(testing_state(base, s), beam, grid))
                          for s in ("psi2", "psi3")]
            for eff in (0.9, 0.5, 0.1, 0.01):
                r = run_deutsch(kind, DeutschOptions(efficiency=eff))
                assert abs(r.event_probability - eff * base.event_probability) <= 1e-15
                assert r.verdict == base.verdict
                assert np.array_equal(r.psi2.logical, base.psi2.logical)
                assert np.array_equal(r.psi3.logical, base.psi3.logical)
                assert r.psi3.global_phase == base.psi3.global_phase
                stats = [pattern_stats(render_state(testing_state(r, s), beam, grid))
                         for s in ("psi2", "psi3")]
                assert stats == base_stats
        setup = build_gate("CNOT")
        target = OAMSuperposition({0: 0.6, -1: 0.8j})
        control = OAMSuperposition.basis(1, role="control")
        full = gate_event(setup, control, target)
        for eff in (0.3, 0.77):
            part = gate_event(setup, control, target, efficiency=eff)
            assert part.signal == full.signal
            assert part.weight == pytest.approx(eff * full.weight, rel=1e-15)


def test_08_determinism_and_io(criterion, tmp_path, capsys):
    with criterion(8, "byte-identical records/images for identical configs; PGM/CSV round-trip"):
        cfg = tmp_path / "run.ini"
        cfg.write_text("gate = CNOT\n[grid]\nn = 128\n[output]\nformats = pgm, csv\n")
        for name in ("a", "b"):
            assert main(["run", "--config", str(cfg), "--out", str(tmp_path / name)]) == 0
        capsys.readouterr()
        files = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert {"result.json", "psi2_testing.pgm", "psi3_testing.pgm",
                "psi2_testing.csv", "psi3_testing.csv"} <= set(files)
        for f in files:
            assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()

        grid = render_state(OAMSuperposition({0: S, 1: S}), grid=GridSpec(n=64))
        write_pgm(grid, tmp_path / "g.pgm")
        pixels, scale = read_pgm(tmp_path / "g.pgm")
        assert np.array_equal(pixels, quantize(grid)) and scale == grid.max
        write_pgm(RealGrid(pixels / 65535.0 * scale), tmp_path / "g2.pgm")
        assert np.array_equal(read_pgm(tmp_path / "g2.pgm")[0], pixels)
        write_csv(grid, tmp_path / "g.csv")
        back = read_csv(tmp_path / "g.csv")
        assert np.array_equal(back, grid.values)
        write_csv(RealGrid(back), tmp_path / "g2.csv")
        assert (tmp_path / "g.csv").read_bytes() == (tmp_path / "g2.csv").read_bytes()
