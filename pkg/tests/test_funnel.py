import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import ndimage

from funnel_lines.funnel import (ExpansionWarning, funnel_field, funnel_transform,
                                 inverse_funnel_transform, nvmt_dft)
from funnel_lines.imaging import expand_for_inverse, expand_for_regular, synth_line, transpose
from oracles import direct_funnel_field, direct_nvmt_dft


def rel_err(a, b):
    return np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300)


def regular(img, **kw):
    h, w = img.shape
    return funnel_transform(expand_for_regular(img), (w, h), **kw)


def inverse(img, **kw):
    h, w = img.shape
    return inverse_funnel_transform(expand_for_inverse(img), (w, h), **kw)


@pytest.mark.parametrize("s", [0.3, -0.3, 0.5, -0.25, 1.0, 2 / 9, -4 / 9, 0.05])
@pytest.mark.parametrize("w", [8, 9])
def test_nvmt_dft_matches_alias_sum(s, w):
    row = np.random.default_rng(w).normal(size=w) + 1j
    assert rel_err(nvmt_dft(row, s), direct_nvmt_dft(row, s)) <= 1e-10
    assert rel_err(nvmt_dft(row, s, jacobian=False),
                   direct_nvmt_dft(row, s, jacobian=False)) <= 1e-10


def test_nvmt_dft_zero_scale_is_zero():
    assert not nvmt_dft(np.ones(6), 0.0).any()


def test_nvmt_dft_rows_are_independent():
    rows = np.random.default_rng(3).normal(size=(4, 10))
    out = nvmt_dft(rows, 0.4)
    for r in range(4):
        assert np.allclose(out[r], nvmt_dft(rows[r], 0.4), atol=1e-12)


def test_zero_image_gives_zero_spaces():
    img = np.zeros((16, 16))
    assert not regular(img).magnitudes.any()
    assert not inverse(img).magnitudes.any()


def test_space_shapes():
    img = np.zeros((10, 12))
    assert regular(img).shape == (10 + 12, 12)
    assert inverse(img).shape == (10, 12 + 10)
    assert regular(img).source_dims == (12, 10)


@pytest.mark.parametrize("shape", [(8, 8), (9, 8), (8, 7), (11, 5), (12, 6)])
def test_field_matches_direct_four_step_summation(shape):
    img = np.random.default_rng(sum(shape)).random(shape)
    expected = direct_funnel_field(img)
    assert rel_err(funnel_field(img), expected) <= 1e-8
    assert rel_err(funnel_field(img, half_spectrum=False), expected) <= 1e-8


def test_8x8_image_against_oracle_through_public_api():
    img = np.random.default_rng(0).random((8, 8))
    sp = regular(img, keep_complex=True)
    expected = direct_funnel_field(expand_for_regular(img))
    assert rel_err(sp.complex_field, expected) <= 1e-8
    assert np.allclose(sp.magnitudes, np.abs(expected.real), atol=1e-9 * np.abs(expected).max())


def test_line_k05_b10_peaks_at_16_10():
    sp = regular(synth_line(64, 64, 0.5, 10.0))
    m, n = sp.argmax()
    assert abs(m - 16) <= 1 and abs(n - 10) <= 1


def test_vertical_line_peaks_in_inverse_space():
    sp = inverse(synth_line(64, 64, 0.0, 7.0, inverse=True))
    m, n = sp.argmax()
    assert abs(m - 7) <= 1 and abs(n) <= 1


def test_point_maps_to_a_line():
    # a point (u, v) traces n = v - 2 u m / W; exact where that is an integer
    w = h = 32
    u, v = 4, 3
    img = np.zeros((h, w))
    img[v + h // 2, u + w // 2] = 1.0
    sp = regular(img)
    mag = sp.magnitudes
    for m in range(-16, 16, 4):
        col = mag[:, m + w // 2]
        n = int(np.argmax(col)) - mag.shape[0] // 2
        # the seam column m = -W/2 is slope k = +1, as in peak_to_line
        m_eff = w // 2 if m == -(w // 2) else m
        assert n == v - 2 * u * m_eff // w


def test_imaginary_residue_is_round_off():
    img = np.random.default_rng(1).random((20, 14))
    field = regular(img, keep_complex=True).complex_field
    assert np.abs(field.imag).max() <= 1e-8 * np.abs(field.real).max()


def test_linearity():
    rng = np.random.default_rng(2)
    a, b = rng.random((12, 10)), rng.random((12, 10))
    f = lambda x: funnel_field(expand_for_regular(x))
    assert rel_err(f(2.5 * a + b), 2.5 * f(a) + f(b)) <= 1e-9


def test_half_spectrum_shortcut_matches_full():
    img = synth_line(40, 40, 0.3, -4.0) + np.random.default_rng(3).random((40, 40))
    half = regular(img).magnitudes
    full = regular(img, half_spectrum=False).magnitudes
    assert np.max(np.abs(half - full)) <= 1e-10 * half.max()


@pytest.mark.parametrize("threads", [2, 3, 8])
def test_threads_do_not_change_output(threads):
    img = np.random.default_rng(4).random((24, 20))
    assert np.array_equal(regular(img).magnitudes, regular(img, threads=threads).magnitudes)


@pytest.mark.parametrize("k,b", [(0.5, 10.0), (0.25, -7.0), (-0.8, 3.0), (0.0, 0.0)])
def test_peak_energy_dominates_every_other_block(k, b):
    sp = regular(synth_line(64, 64, k, b))
    energy = ndimage.uniform_filter(sp.magnitudes ** 2, 3, mode="constant") * 9
    r, c = np.unravel_index(np.argmax(sp.magnitudes), sp.shape)
    others = energy.copy()
    # any block sharing a cell with the peak block is not "another" block
    others[max(r - 2, 0):r + 3, max(c - 2, 0):c + 3] = 0
    assert energy[r, c] >= 5 * others.max()


@settings(max_examples=10, deadline=None)
@given(delta=st.integers(-12, 12))
def test_intercept_shift_moves_only_n(delta):
    base = regular(synth_line(48, 48, 0.25, 2.0)).argmax()
    moved = regular(synth_line(48, 48, 0.25, 2.0 + delta)).argmax()
    assert moved[0] == base[0]
    assert abs(moved[1] - (base[1] + delta)) <= 1


def test_inverse_is_regular_of_transpose():
    img = np.random.default_rng(5).random((14, 10))
    inv = inverse(img).magnitudes
    reg_t = regular(transpose(img)).magnitudes
    assert np.allclose(inv, reg_t.T, atol=1e-12)


def test_unexpanded_input_warns():
    with pytest.warns(ExpansionWarning):
        funnel_transform(np.ones((16, 16)))


def test_expanded_input_does_not_warn():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        funnel_transform(expand_for_regular(np.ones((16, 16))))


def test_source_dims_inferred_from_padding():
    sp = funnel_transform(expand_for_regular(np.ones((10, 7))))
    assert sp.source_dims == (7, 10)
    sp = inverse_funnel_transform(expand_for_inverse(np.ones((10, 7))))
    assert sp.source_dims == (7, 10)


def test_space_value_and_cell_helpers():
    sp = regular(synth_line(32, 32, 0.5, 4.0))
    m, n = sp.argmax()
    assert sp.value(m, n) == sp.magnitudes.max()
    rows, cols = sp.shape
    assert sp.cell_of(rows // 2, cols // 2) == (0, 0)
