"""Sweep harness: detection quality against ground truth on synthetic scenes."""

import csv
import io
import time
from dataclasses import astuple, dataclass, fields, replace

import numpy as np

from .detect import DetectConfig, detect_lines
from .imaging import NoiseModel, apply_noise, occlude_disk
from .parammap import line_to_rho_theta, same_geometry
from .scenes import render_lines, star_scene, step_scene

__all__ = [
    "SweepRow",
    "STEP_VERIFY_RATIO",
    "PEAKS_PER_LINE",
    "match_lines",
    "evaluate",
    "scene",
    "noise_sweep",
    "occlusion_sweep",
    "thickness_sweep",
    "rows_to_csv",
]

# A step of height J is split over two band offsets by nearest-pixel
# sampling, so its score tops out near J / (2 std); three crossing steps of
# height 1/3 score about 0.4-1.0.  Step scenes are verified at this ratio.
STEP_VERIFY_RATIO = 0.4


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    true_positives: int
    false_positives: int
    mean_localization_error_rho_px: float
    mean_localization_error_theta_deg: float
    runtime_ms: float


def _angle_gap(a, b):
    d = abs(a - b) % 180.0
    return min(d, 180.0 - d)


def _rho_gap(a, b):
    rho_a, th_a = line_to_rho_theta(a)
    rho_b, th_b = line_to_rho_theta(b)
    if abs(th_a - th_b) > 90.0:
        rho_b = -rho_b
    return abs(rho_a - rho_b), _angle_gap(th_a, th_b)


def match_lines(found, truth, tol_angle=2.0, tol_offset=3.0):
    """Greedy one-to-one matching of detected to ground-truth lines.

    ``found`` is in priority order; each ground-truth line is claimed by
    the first unclaimed detection within tolerance.  Returns
    ``(true_positives, false_positives, rho_errors, theta_errors)``.
    """
    claimed = [False] * len(truth)
    tp, fp, drho, dth = 0, 0, [], []
    for line in found:
        for i, gt in enumerate(truth):
            if not claimed[i] and same_geometry(line, gt, tol_angle, tol_offset):
                claimed[i] = True
                tp += 1
                r, t = _rho_gap(line, gt)
                drho.append(r)
                dth.append(t)
                break
        else:
            fp += 1
    return tp, fp, drho, dth


def evaluate(img, truth, cfg, sweep_value):
    """Detect lines in ``img`` and score them into a :class:`SweepRow`."""
    start = time.perf_counter()
    found = detect_lines(img, cfg, with_extent=False)
    elapsed = (time.perf_counter() - start) * 1e3
    tp, fp, drho, dth = match_lines([d.line for d in found], truth)
    return SweepRow(
        float(sweep_value), tp, fp,
        float(np.mean(drho)) if drho else float("nan"),
        float(np.mean(dth)) if dth else float("nan"),
        elapsed,
    )


# Peaks kept per space and ground-truth line.  Noisy step scenes produce a
# false candidate now and then; a second slot per line keeps it from
# crowding out a true line before verification.
PEAKS_PER_LINE = {"star": 1, "step": 2}


def scene(name, size=None, thickness=1.0):
    """``(image, lines, default_verify_ratio)`` for a named scene."""
    if name == "star":
        size = 351 if size is None else size
        img, lines = star_scene(size)
        if thickness != 1.0:
            img = render_lines(size, size, lines, thickness=thickness)
        return img, lines, DetectConfig().verify_ratio
    if name == "step":
        img, lines = step_scene(512 if size is None else size)
        return img, lines, STEP_VERIFY_RATIO
    raise ValueError(f"unknown scene {name!r}")


def _config(cfg, truth, default_ratio, per_line=1):
    if cfg is None:
        return DetectConfig(max_peaks=per_line * len(truth), verify_ratio=default_ratio)
    return cfg


def noise_sweep(levels, variant="gaussian", scene_name="star", size=None,
                seed=0, cfg=None):
    """One row per noise level; ``level`` is the variance or density."""
    img, truth, ratio = scene(scene_name, size)
    cfg = _config(cfg, truth, ratio, PEAKS_PER_LINE[scene_name])
    rows = []
    for level in levels:
        noisy = apply_noise(img, NoiseModel(variant, float(level), seed))
        rows.append(evaluate(noisy, truth, cfg, level))
    return rows


def occlusion_sweep(diameters, size=351, cfg=None):
    """Star scene hidden behind a central disk of each diameter."""
    img, truth, ratio = scene("star", size)
    cfg = _config(cfg, truth, ratio)
    return [evaluate(occlude_disk(img, 0, 0, d), truth, cfg, d) for d in diameters]


def thickness_sweep(thicknesses, size=351, cfg=None):
    """Star scene drawn with ridges of each thickness.

    A ridge wider than a pixel has two edges and can give two peaks, so the
    default configuration keeps two peaks per ground-truth line.
    """
    rows = []
    for t in thicknesses:
        img, truth, ratio = scene("star", size, thickness=t)
        rows.append(evaluate(img, truth, _config(cfg, truth, ratio, per_line=2), t))
    return rows


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v != v:
        return "nan"
    return f"{v:.6g}"


def rows_to_csv(rows, include_runtime=True):
    """CSV text with a header row.

    Wall-clock ``runtime_ms`` is the only field that varies between runs;
    with ``include_runtime=False`` it is left empty so the output is
    byte-reproducible.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(SweepRow)])
    for r in rows:
        if not include_runtime:
            r = replace(r, runtime_ms=float("nan"))
        vals = [_fmt(v) for v in astuple(r)]
        if not include_runtime:
            vals[-1] = ""
        w.writerow(vals)
    return buf.getvalue()
