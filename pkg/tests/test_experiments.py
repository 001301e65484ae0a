import math

import numpy as np
import pytest

from funnel_lines.experiments import (PEAKS_PER_LINE, STEP_VERIFY_RATIO, SweepRow, match_lines, noise_sweep,
                                      occlusion_sweep, rows_to_csv, scene, thickness_sweep)
from funnel_lines.parammap import LineModel


def test_match_lines_is_one_to_one():
    truth = [LineModel(0.0, 0.0), LineModel(0.5, 4.0)]
    found = [LineModel(0.0, 1.0), LineModel(0.0, -1.0), LineModel(0.5, 4.0),
             LineModel(-0.5, 0.0)]
    tp, fp, drho, dth = match_lines(found, truth)
    assert (tp, fp) == (2, 2)
    assert drho == [pytest.approx(1.0), pytest.approx(0.0)]
    assert dth == [0.0, 0.0]


def test_scenes():
    img, lines, ratio = scene("star", 101)
    assert img.shape == (101, 101) and len(lines) == 8 and ratio == 1.0
    img, lines, ratio = scene("step", 64)
    assert len(lines) == 3 and ratio == STEP_VERIFY_RATIO
    assert set(np.round(np.unique(img) * 3).astype(int)) <= {0, 1, 2, 3}
    with pytest.raises(ValueError):
        scene("house")


def test_noiseless_star_row():
    (row,) = noise_sweep([0.0])
    assert (row.true_positives, row.false_positives) == (8, 0)
    assert row.mean_localization_error_rho_px <= 3
    assert row.mean_localization_error_theta_deg <= 2


def test_gaussian_sweep_on_the_star_never_gains_lines():
    rows = noise_sweep([0.0, 0.1, 0.5, 1.0])
    tps = [r.true_positives for r in rows]
    assert tps == sorted(tps, reverse=True)
    assert tps[0] == 8


def test_salt_pepper_sweep_on_the_star_never_gains_lines():
    rows = noise_sweep([0.0, 0.3, 0.5, 0.7], variant="salt_pepper")
    tps = [r.true_positives for r in rows]
    assert tps == sorted(tps, reverse=True)


def test_occlusion_sweep_up_to_286_px():
    rows = occlusion_sweep([1, 77, 129, 286])
    assert [r.true_positives for r in rows] == [8] * 4
    assert [r.false_positives for r in rows] == [0] * 4


def test_thickness_sweep_finds_every_line():
    rows = thickness_sweep([1, 3, 5, 7])
    assert [r.true_positives for r in rows] == [8] * 4


def test_csv_format():
    rows = [SweepRow(0.1, 3, 0, 0.25, math.nan, 12.3456789)]
    text = rows_to_csv(rows)
    assert text.splitlines()[1] == "0.1,3,0,0.25,nan,12.3457"
    assert rows_to_csv(rows, include_runtime=False).splitlines()[1] == "0.1,3,0,0.25,nan,"


def test_noisy_step_scene_keeps_every_line():
    rows = noise_sweep([0.0, 0.1], scene_name="step")
    assert [(r.true_positives, r.false_positives) for r in rows] == [(3, 0), (3, 0)]


def test_step_scene_gets_two_slots_per_line():
    assert PEAKS_PER_LINE == {"star": 1, "step": 2}
