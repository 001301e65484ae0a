"""Grayscale raster helpers and synthetic scenes.

Images are plain 2D float arrays indexed ``img[row, col]`` with shape
``(H, W)``.  Pixel ``(row, col)`` sits at centered coordinates
``x = col - W // 2`` and ``y = row - H // 2``; y grows with the row index.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "NoiseModel",
    "centered_grid",
    "check_image",
    "expand_for_regular",
    "expand_for_inverse",
    "transpose",
    "synth_line",
    "apply_noise",
    "occlude_disk",
    "crop_center",
]

MIN_SIZE = 4


def check_image(img):
    img = np.asarray(img, dtype=float)
    if img.ndim != 2:
        raise ValueError(f"expected a 2D image, got shape {img.shape}")
    h, w = img.shape
    if w < MIN_SIZE or h < MIN_SIZE:
        raise ValueError(f"image must be at least {MIN_SIZE}x{MIN_SIZE}, got {w}x{h}")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains non-finite values")
    return img


def centered_grid(shape):
    """Return ``(x, y)`` coordinate arrays for an ``(H, W)`` raster."""
    h, w = shape
    y, x = np.mgrid[0:h, 0:w]
    return x - w // 2, y - h // 2


def expand_for_regular(img):
    """Zero-pad ``ceil(W / 2)`` rows above and below the image.

    The result has shape ``(H + 2 * ceil(W / 2), W)``, large enough that every
    line with slope in ``[-1, 1]`` crossing the image keeps its y-intercept
    inside the padded height.
    """
    img = check_image(img)
    w = img.shape[1]
    pad = -(-w // 2)
    return np.pad(img, ((pad, pad), (0, 0)))


def expand_for_inverse(img):
    """Zero-pad ``ceil(H / 2)`` columns left and right of the image."""
    return transpose(expand_for_regular(transpose(img)))


def crop_center(expanded, shape):
    """Undo :func:`expand_for_regular` / :func:`expand_for_inverse`."""
    h, w = shape
    he, we = expanded.shape
    r0 = (he - h) // 2
    c0 = (we - w) // 2
    return expanded[r0:r0 + h, c0:c0 + w]


def transpose(img):
    return np.ascontiguousarray(np.asarray(img).T)


def _line_distance(x, y, k, b, inverse):
    # perpendicular distance to y = kx + b (or x = ky + b when inverse)
    if inverse:
        x, y = y, x
    return np.abs(y - k * x - b) / np.hypot(1.0, k)


def synth_line(width, height, k, b, thickness=1.0, profile="ridge",
               amplitude=1.0, inverse=False):
    """Rasterize an ideal line without anti-aliasing.

    Parameters
    ----------
    width, height : int
        Raster size.
    k, b : float
        Line ``y = k x + b`` in centered pixel coordinates, or
        ``x = k y + b`` when ``inverse`` is true.
    thickness : float
        Ridge lines light every pixel whose center lies within
        ``thickness / 2`` of the line.
    profile : {'ridge', 'step'}
        ``'step'`` lights the half plane ``y > k x + b`` (``x > k y + b``).
    amplitude : float
        Value of lit pixels; everything else is 0.
    """
    if width < MIN_SIZE or height < MIN_SIZE:
        raise ValueError(f"image must be at least {MIN_SIZE}x{MIN_SIZE}")
    if thickness < 1:
        raise ValueError("thickness must be >= 1")
    if not np.isfinite(k) or not np.isfinite(b):
        raise ValueError("line parameters must be finite")
    x, y = centered_grid((height, width))
    if profile == "ridge":
        mask = _line_distance(x, y, k, b, inverse) <= thickness / 2.0
    elif profile == "step":
        mask = (x > k * y + b) if inverse else (y > k * x + b)
    else:
        raise ValueError(f"unknown profile {profile!r}")
    return np.where(mask, float(amplitude), 0.0)


@dataclass(frozen=True)
class NoiseModel:
    """Seeded noise description.

    ``variant`` is ``'gaussian'`` (additive, ``level`` = variance),
    ``'salt_pepper'`` (``level`` = corrupted fraction) or ``'speckle'``
    (multiplicative ``1 + N(0, level)``).
    """

    variant: str
    level: float
    seed: int = 0

    def __post_init__(self):
        if self.variant not in ("gaussian", "salt_pepper", "speckle"):
            raise ValueError(f"unknown noise variant {self.variant!r}")
        if self.level < 0:
            raise ValueError("noise level must be non-negative")
        if self.variant == "salt_pepper" and self.level > 1:
            raise ValueError("salt and pepper density must be <= 1")


def apply_noise(img, model):
    """Corrupt ``img`` according to ``model``; the result is not clamped.

    Salt and pepper corrupts exactly ``round(density * size)`` pixels chosen
    by a seeded permutation, each set to 0 or 1 with equal probability.
    """
    img = check_image(img)
    rng = np.random.default_rng(model.seed)
    if model.level == 0:
        return img.copy()
    if model.variant == "gaussian":
        return img + rng.normal(0.0, np.sqrt(model.level), img.shape)
    if model.variant == "speckle":
        return img * (1.0 + rng.normal(0.0, np.sqrt(model.level), img.shape))
    out = img.copy()
    count = int(round(model.level * img.size))
    idx = rng.permutation(img.size)[:count]
    out.flat[idx] = rng.integers(0, 2, count).astype(float)
    return out


def occlude_disk(img, cx, cy, diameter, fill=0.0):
    """Set pixels strictly closer than ``diameter / 2`` to ``(cx, cy)``."""
    if diameter < 0:
        raise ValueError("diameter must be non-negative")
    img = check_image(img)
    x, y = centered_grid(img.shape)
    out = img.copy()
    out[np.hypot(x - cx, y - cy) < diameter / 2.0] = fill
    return out
