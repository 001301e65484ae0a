"""Synthetic test scenes with known ground-truth lines."""

import math

import numpy as np

from .imaging import occlude_disk, synth_line
from .parammap import LineModel

__all__ = ["line_from_angle", "render_lines", "star_scene", "three_line_scene",
           "step_scene", "thickness_scene"]


def line_from_angle(theta_deg, rho=0.0):
    """Line with direction angle ``theta_deg`` at signed distance ``rho`` from the center.

    Lines with ``|tan(theta)| <= 1`` use the slope form, steeper ones the
    inverse form, so each model lives in its unwrapped space.
    """
    t = math.radians(theta_deg)
    dx, dy = math.cos(t), math.sin(t)
    # point on the line closest to the center, along the normal (-dy, dx)
    px, py = -dy * rho, dx * rho
    if abs(dy) <= abs(dx) and not math.isclose(dy, -dx, abs_tol=1e-12):
        k = dy / dx
        return LineModel(k, py - k * px)
    k = dx / dy
    return LineModel(k, px - k * py, inverse=True)


def render_lines(width, height, lines, thickness=1.0, profile="ridge", amplitude=1.0):
    """Rasterize ``lines`` on one canvas; ridges are combined by maximum."""
    img = np.zeros((height, width))
    for ln in lines:
        img = np.maximum(img, synth_line(width, height, ln.slope, ln.intercept,
                                         thickness=thickness, profile=profile,
                                         amplitude=amplitude, inverse=ln.inverse))
    return img


STAR_ANGLES = tuple(22.5 * i for i in range(8))


def star_scene(size=351, n_lines=8, occlusion=0.0, angles=None):
    """Ridge lines through the image center, optionally hidden by a central disk.

    Returns ``(image, lines)``.
    """
    if angles is None:
        angles = [STAR_ANGLES[0] + 180.0 * i / n_lines for i in range(n_lines)]
    lines = [line_from_angle(a) for a in angles]
    img = render_lines(size, size, lines)
    if occlusion > 0:
        img = occlude_disk(img, 0, 0, occlusion, fill=0.0)
    return img, lines


def three_line_scene(size=64):
    """Three single-pixel ridge lines; the first is the one examined for peak shape."""
    lines = [
        LineModel(0.25, -10.0),
        LineModel(-0.6, 8.0),
        LineModel(0.3, 12.0, inverse=True),
    ]
    return render_lines(size, size, lines), lines


def step_scene(size=128):
    """Three full-crossing step edges of equal height, summed.

    Every edge raises the intensity by ``1/3`` on its lit side, so the
    image takes values in ``{0, 1/3, 2/3, 1}``.  Returns ``(image, lines)``.
    """
    lines = [
        LineModel(0.35, -size * 0.15),
        LineModel(-0.5, size * 0.2),
        LineModel(0.2, size * 0.12, inverse=True),
    ]
    img = np.zeros((size, size))
    for ln in lines:
        img += synth_line(size, size, ln.slope, ln.intercept, profile="step",
                          amplitude=1.0 / len(lines), inverse=ln.inverse)
    return img, lines


def thickness_scene(size=128, thicknesses=(1, 3, 5)):
    """Parallel horizontal-ish ridges of different thickness."""
    lines, img = [], np.zeros((size, size))
    gap = size / (len(thicknesses) + 1)
    for i, t in enumerate(thicknesses):
        ln = LineModel(0.1, -size / 2 + gap * (i + 1))
        lines.append(ln)
        img = np.maximum(img, synth_line(size, size, ln.slope, ln.intercept, thickness=t))
    return img, lines
