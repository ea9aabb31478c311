import cmath
import math

import numpy as np
import pytest

from oamdeutsch.deutsch import run_deutsch, testing_state
from oamdeutsch.gates import element_apply, mirror
from oamdeutsch.lgmode import BeamParams, GridSpec
from oamdeutsch.oamstate import OAMSuperposition
from oamdeutsch.render import (AZIMUTHAL_BINS, PatternStats, RealGrid, format_csv,
                               pattern_stats, quantize, read_csv, read_pgm, render_state,
                               write_csv, write_image, write_pgm)

from conftest import SQRT_HALF

BIN = 2 * math.pi / AZIMUTHAL_BINS


def wrap(a):
    return (a + math.pi) % (2 * math.pi) - math.pi


def stats_of(coeffs, grid=GridSpec(), beam=BeamParams()):
    return pattern_stats(render_state(OAMSuperposition(coeffs), beam, grid))


def test_gaussian_stats():
    s = stats_of({0: 1})
    assert s.center_intensity_ratio > 0.99
    assert s.classify() == "gaussian"


@pytest.mark.parametrize("l", [1, -1])
def test_doughnut_stats(l):
    s = stats_of({l: 1})
    assert s.center_intensity_ratio < 0.01
    # argmax of r^2 exp(-2 r^2 / w^2) is r = w / sqrt(2)
    assert s.ring_radius == pytest.approx(1 / math.sqrt(2), rel=0.01)
    assert s.anisotropy < 0.1
    assert s.classify() == "doughnut"


def test_ring_radius_scales_with_waist():
    beam = BeamParams(waist_w0=2.0, rayleigh_zR=3.0)
    assert stats_of({1: 1}, beam=beam).ring_radius == pytest.approx(1 / math.sqrt(2), rel=0.01)


def test_interference_lobe_direction():
    plus = stats_of({0: SQRT_HALF, 1: SQRT_HALF})
    assert plus.anisotropy > 0.9
    assert abs(wrap(plus.azimuth_of_max)) <= math.radians(2)
    assert plus.classify() == "interference"
    minus = stats_of({0: SQRT_HALF, 1: -SQRT_HALF})
    assert abs(wrap(minus.azimuth_of_max - math.pi)) <= math.radians(2)
    assert -math.pi < minus.azimuth_of_max <= math.pi


@pytest.mark.parametrize("z", [0.0, 1.0])
@pytest.mark.parametrize("theta", [0.4, 1.3, 2.5, -2.0, math.pi])
def test_relative_phase_rotates_lobe(theta, z):
    grid = GridSpec(n=256, z=z)
    base = stats_of({0: SQRT_HALF, 1: SQRT_HALF}, grid)
    rot = stats_of({0: SQRT_HALF, 1: SQRT_HALF * cmath.exp(1j * theta)}, grid)
    assert abs(wrap(rot.azimuth_of_max - base.azimuth_of_max + theta)) <= 2 * BIN


def test_mirror_reflects_image_exactly():
    s = OAMSuperposition({0: 0.6, 1: 0.48 + 0.64j})
    a = render_state(s, grid=GridSpec(n=128)).values
    b = render_state(element_apply(mirror(), s), grid=GridSpec(n=128)).values
    # phi -> -phi is y -> -y, i.e. reversing the row order
    assert np.array_equal(b, a[::-1, :])


@pytest.mark.parametrize("theta", [0.3, 2.0, -1.1])
def test_global_phase_invariance(theta):
    s = OAMSuperposition({0: 0.6, -1: 0.8j})
    a = render_state(s, grid=GridSpec(n=64)).values
    b = render_state(s * cmath.exp(1j * theta), grid=GridSpec(n=64)).values
    assert np.allclose(a, b, rtol=1e-12, atol=1e-15)


def test_constant_and_balanced_testing_states_are_opposite():
    az = {k: stats_of(testing_state(run_deutsch(k), "psi2").coefficients).azimuth_of_max
          for k in ("I", "NOT", "CNOT", "ZCNOT")}
    assert abs(wrap(az["I"] - az["NOT"])) <= 2 * BIN
    assert abs(wrap(az["CNOT"] - az["ZCNOT"])) <= 2 * BIN
    assert abs(abs(wrap(az["CNOT"] - az["I"])) - math.pi) <= 2 * BIN


def test_classify_thresholds():
    assert PatternStats(0.95, 0.0, 0.0, 0.0).classify() == "gaussian"
    assert PatternStats(0.01, 0.7, 0.0, 0.05).classify() == "doughnut"
    assert PatternStats(0.5, 0.4, 0.0, 0.8).classify() == "interference"
    assert PatternStats(0.5, 0.4, 0.0, 0.3).classify() == "unclassified"


def test_all_zero_grid_rejected():
    with pytest.raises(ValueError):
        pattern_stats(RealGrid(np.zeros((16, 16)), GridSpec(n=16)))


def test_real_grid_validation():
    with pytest.raises(ValueError):
        RealGrid(np.array([[0.0, -1.0]]))
    with pytest.raises(ValueError):
        RealGrid(np.array([[0.0, np.nan]]))
    with pytest.raises(ValueError):
        RealGrid(np.zeros((4, 4)), GridSpec(n=16))


def test_pgm_hand_quantisation(tmp_path):
    g = RealGrid(np.array([[0.0, 1.0], [1.0, 0.0]]))
    path = tmp_path / "g.pgm"
    write_pgm(g, path)
    data = path.read_bytes()
    assert data.startswith(b"P5\n# scale_max 1.0\n2 2\n65535\n")
    assert data.endswith(b"\x00\x00\xff\xff\xff\xff\x00\x00")
    pixels, scale = read_pgm(path)
    assert pixels.tolist() == [[0, 65535], [65535, 0]]
    assert scale == 1.0


def test_pgm_round_trip(tmp_path):
    g = render_state(OAMSuperposition({0: SQRT_HALF, -1: SQRT_HALF}), grid=GridSpec(n=64))
    p1, p2 = tmp_path / "a.pgm", tmp_path / "b.pgm"
    write_pgm(g, p1)
    pixels, scale = read_pgm(p1)
    assert np.array_equal(pixels, quantize(g))
    assert scale == g.max
    write_pgm(RealGrid(pixels.astype(float) / 65535 * scale), p2)
    assert np.array_equal(read_pgm(p2)[0], pixels)


def test_csv_format_and_round_trip(tmp_path):
    assert format_csv(np.array([[0.0, 1.0], [1.0, 0.0]])) == "0,1\n1,0\n"
    g = render_state(OAMSuperposition({1: 1}), grid=GridSpec(n=32))
    path = tmp_path / "g.csv"
    write_csv(g, path)
    assert np.array_equal(read_csv(path), g.values)


def test_io_errors_name_the_path(tmp_path):
    g = RealGrid(np.ones((2, 2)))
    bad = tmp_path / "missing" / "x.pgm"
    with pytest.raises(OSError, match="missing"):
        write_pgm(g, bad)
    with pytest.raises(OSError, match="missing"):
        read_pgm(bad)
    with pytest.raises(ValueError):
        write_image(g, tmp_path / "x.png", "png")


def test_format_flag_not_extension(tmp_path):
    g = RealGrid(np.ones((2, 2)))
    path = tmp_path / "image.csv"
    write_image(g, path, "pgm")
    assert path.read_bytes().startswith(b"P5")
