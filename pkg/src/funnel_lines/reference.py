"""Brute-force Radon transform and peak-sharpness metrics.

The Radon transform here is deliberately naive: every ``(rho, theta)`` cell
walks its line at unit steps and sums nearest-pixel samples.  It serves as
an oracle and as the baseline that funnel peaks are compared against.
"""

import math
from dataclasses import dataclass

import numpy as np

from .imaging import check_image

__all__ = ["Sinogram", "radon_direct", "sharpness", "half_max_width"]


@dataclass
class Sinogram:
    """Radon field ``values[rho_index, theta_index]``.

    Attributes
    ----------
    values : numpy.ndarray
        Line sums, shape ``(n_rho, n_theta)``.
    rho : numpy.ndarray
        Signed distances from the image center in pixels, ``[-R, R]``.
    theta_deg : numpy.ndarray
        Normal angles in degrees, ``[0, 180)``.
    """

    values: np.ndarray
    rho: np.ndarray
    theta_deg: np.ndarray

    def argmax(self):
        """``(rho_index, theta_index)`` of the largest line sum."""
        return tuple(int(i) for i in np.unravel_index(np.argmax(self.values), self.values.shape))

    def cell_of(self, rho, theta_deg):
        """Nearest cell to a normal-form line ``(rho, theta)``."""
        theta_deg = theta_deg % 180.0
        i = int(np.argmin(np.abs(self.rho - rho)))
        d = np.abs(self.theta_deg - theta_deg)
        j = int(np.argmin(np.minimum(d, 180.0 - d)))
        return i, j


def radon_direct(img, n_theta=180, n_rho=None):
    """Discrete Radon transform by direct summation.

    Cell ``(i, j)`` sums the pixels nearest to the points
    ``rho_i n + t d`` for integer ``t``, where ``n = (cos theta_j, sin theta_j)``
    is the line normal and ``d`` its direction; points outside the image
    contribute nothing.

    Parameters
    ----------
    img : array_like
        Grayscale image in centered coordinates.
    n_theta : int
        Angles ``180 j / n_theta`` degrees.
    n_rho : int, optional
        Offsets evenly spaced over ``[-R, R]``, ``R = sqrt(W^2 + H^2) / 2``.
        Defaults to ``2 ceil(R) + 1`` (unit spacing).
    """
    img = check_image(img)
    h, w = img.shape
    radius = math.hypot(w, h) / 2.0
    if n_rho is None:
        n_rho = 2 * int(math.ceil(radius)) + 1
    if n_theta < 2 or n_rho < 2:
        raise ValueError("n_theta and n_rho must be at least 2")
    rho = np.linspace(-radius, radius, n_rho)
    theta = 180.0 * np.arange(n_theta) / n_theta
    reach = int(math.ceil(radius))
    t = np.arange(-reach, reach + 1, dtype=float)
    out = np.zeros((n_rho, n_theta))
    for j, th in enumerate(np.radians(theta)):
        c, s = math.cos(th), math.sin(th)
        px = rho[:, None] * c - t[None, :] * s
        py = rho[:, None] * s + t[None, :] * c
        col = np.rint(px).astype(int) + w // 2
        row = np.rint(py).astype(int) + h // 2
        inside = (col >= 0) & (col < w) & (row >= 0) & (row < h)
        vals = np.zeros(px.shape)
        vals[inside] = img[row[inside], col[inside]]
        out[:, j] = vals.sum(axis=1)
    return Sinogram(out, rho, theta)


def half_max_width(profile, center):
    """Length of the run of samples ``>= profile[center] / 2`` containing ``center``."""
    profile = np.asarray(profile, dtype=float)
    half = profile[center] / 2.0
    lo = center
    while lo > 0 and profile[lo - 1] >= half:
        lo -= 1
    hi = center
    while hi < len(profile) - 1 and profile[hi + 1] >= half:
        hi += 1
    return hi - lo + 1


def sharpness(field, peak):
    """Concentration and half-maximum widths of a peak.

    Parameters
    ----------
    field : array_like
        Non-negative 2D field.
    peak : tuple of int
        Array index ``(row, col)`` of the peak.

    Returns
    -------
    conc3 : float
        Energy (sum of squares) in the 3x3 block around the peak over the
        total energy.
    fwhm_axis1, fwhm_axis2 : int
        Half-maximum widths in cells along the rows axis (through the
        peak's column) and the columns axis (through its row).
    """
    f = np.abs(np.asarray(field, dtype=float))
    r, c = peak
    energy = np.sum(f ** 2)
    if energy == 0:
        return 0.0, 0, 0
    block = f[max(r - 1, 0):r + 2, max(c - 1, 0):c + 2]
    conc3 = float(np.sum(block ** 2) / energy)
    return conc3, half_max_width(f[:, c], r), half_max_width(f[r, :], c)
