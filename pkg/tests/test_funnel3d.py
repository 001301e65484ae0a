import numpy as np
import pytest

from funnel_lines.funnel3d import (PlaneModel, check_volume, detect_plane, expand_volume,
                                   funnel3d, funnel3d_field, peak_to_plane, plane_to_peak,
                                   synth_plane, synth_point)
from oracles import brute_plane_mask, direct_funnel3d_field


def rel_err(a, b):
    return np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300)


def centered_argmax(field):
    idx = np.unravel_index(np.argmax(field), field.shape)
    l, n, m = (int(i) - d // 2 for i, d in zip(idx, field.shape))
    return m, n, l


def test_plane_model_validation():
    with pytest.raises(ValueError):
        PlaneModel(1.5, 0, 0)
    with pytest.raises(ValueError):
        PlaneModel(0, 0, np.nan)


def test_check_volume():
    for bad in (np.zeros((4, 4)), np.zeros((3, 8, 8)), np.full((4, 4, 4), np.inf)):
        with pytest.raises(ValueError):
            check_volume(bad)


def test_flat_plane_is_the_center_slab():
    vol = synth_plane((8, 8, 8), PlaneModel(0, 0, 0))
    assert np.all(vol[4] == 1.0) and vol.sum() == 64


def test_random_planes_match_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(5):
        a, b = rng.uniform(-1, 1, 2)
        c = rng.uniform(-4, 4)
        got = synth_plane((12, 10, 14), PlaneModel(a, b, c)) > 0
        assert np.array_equal(got, brute_plane_mask((12, 10, 14), a, b, c))


def test_plane_voxel_count():
    vol = synth_plane((32, 32, 32), PlaneModel(0.5, -0.25, 3))
    assert abs(np.count_nonzero(vol) - 32 ** 2) <= 0.1 * 32 ** 2


def test_synth_point_and_expansion():
    vol = synth_point((8, 6, 10), 1, -2, 3)
    assert vol.shape == (10, 6, 8) and vol[3 + 5, -2 + 3, 1 + 4] == 1.0
    assert expand_volume(vol).shape == (10 + 8, 6, 8)


def test_zero_volume_gives_zero_field():
    assert not funnel3d(np.zeros((8, 8, 8))).any()


def test_16_cube_matches_direct_summation():
    vol = np.random.default_rng(1).random((16, 16, 16))
    assert rel_err(funnel3d_field(vol), direct_funnel3d_field(vol)) <= 1e-8


def test_odd_sizes_match_direct_summation():
    vol = np.random.default_rng(2).random((9, 6, 5))
    assert rel_err(funnel3d_field(vol), direct_funnel3d_field(vol)) <= 1e-8


def test_realness_and_linearity():
    rng = np.random.default_rng(3)
    a, b = rng.random((12, 8, 8)), rng.random((12, 8, 8))
    fa, fb = funnel3d_field(a), funnel3d_field(b)
    assert np.abs(fa.imag).max() <= 1e-8 * np.abs(fa.real).max()
    assert rel_err(funnel3d_field(3 * a - b), 3 * fa - fb) <= 1e-9


def test_plane_a05_peaks_at_8_0_0():
    field = funnel3d(synth_plane((32, 32, 32), PlaneModel(0.5, 0, 0)))
    m, n, l = centered_argmax(field)
    assert abs(m - 8) <= 1 and abs(n) <= 1 and abs(l) <= 1


def test_plane_on_16_cube_against_oracle():
    vol = expand_volume(synth_plane((16, 16, 16), PlaneModel(0.25, -0.5, 2)))
    field = np.abs(direct_funnel3d_field(vol).real)
    assert centered_argmax(field) == (2, -4, 2)
    assert centered_argmax(funnel3d(vol, expanded=True)) == (2, -4, 2)


def test_point_maps_to_a_plane():
    # point (x0, y0, z0) traces l = z0 - 2 x0 m / Nx - 2 y0 n / Ny
    x0, y0, z0 = 2, -1, 1
    vol = expand_volume(synth_point((16, 16, 16), x0, y0, z0))
    field = funnel3d(vol, expanded=True)
    oracle = np.abs(direct_funnel3d_field(vol).real)
    assert np.allclose(field, oracle, atol=1e-9 * oracle.max())
    nz = field.shape[0]
    checked = 0
    for m in range(-6, 8, 2):
        for n in range(-6, 8, 2):
            pred = z0 - 2 * x0 * m / 16 - 2 * y0 * n / 16
            if pred != int(pred):
                continue
            l = int(np.argmax(field[:, n + 8, m + 8])) - nz // 2
            assert abs(l - pred) <= 1
            checked += 1
    assert checked >= 10


def test_peak_to_plane():
    assert peak_to_plane(0, 0, 0, 32, 32) == PlaneModel(0, 0, 0)
    assert peak_to_plane(8, 0, 0, 32, 32).a == 0.5
    with pytest.raises(ValueError):
        peak_to_plane(16, 0, 0, 32, 32)
    with pytest.raises(ValueError):
        peak_to_plane(0, 0, 40, 32, 32, nz_e=64)


def test_plane_to_peak_round_trip():
    for m, n, l in [(3, -5, 2), (-16, 15, 0), (0, 0, -7)]:
        assert plane_to_peak(peak_to_plane(m, n, l, 32, 32), 32, 32) == (m, n, l)


def test_five_random_planes_recovered():
    rng = np.random.default_rng(0)
    for _ in range(5):
        a, b = rng.uniform(-0.9, 0.9, 2)
        c = rng.uniform(-6, 6)
        got = detect_plane(synth_plane((32, 32, 32), PlaneModel(a, b, c)))
        assert abs(got.a - a) <= 2 / 32 and abs(got.b - b) <= 2 / 32 and abs(got.c - c) <= 1
