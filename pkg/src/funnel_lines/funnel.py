"""Funnel transform and its dual.

The regular transform maps a line ``y = k x + b`` of an image expanded with
:func:`~funnel_lines.imaging.expand_for_regular` to a peak at centered cell
``(m, n) = (k W / 2, b)``.  The inverse transform does the same for
``x = k' y + b'`` on images expanded with
:func:`~funnel_lines.imaging.expand_for_inverse`, peaking at
``(m, n) = (b', k' H / 2)``.

Parameter spaces are stored like images: ``magnitudes[row, col]`` with the
centered column index ``m`` and row index ``n``.
"""

import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .imaging import check_image, transpose
from .spectral import centered_indices, dft_axis, scaled_dft

__all__ = [
    "ParameterSpace",
    "ExpansionWarning",
    "funnel_field",
    "nvmt_dft",
    "funnel_transform",
    "inverse_funnel_transform",
]


class ExpansionWarning(UserWarning):
    """Input does not look expanded; intercepts may wrap."""


@dataclass
class ParameterSpace:
    """Magnitude field of a (regular or inverse) funnel transform.

    Attributes
    ----------
    kind : str
        ``'regular'`` or ``'inverse'``.
    magnitudes : numpy.ndarray
        Non-negative field, ``magnitudes[n_row, m_col]``.
    source_dims : tuple
        ``(W, H)`` of the original (unexpanded) image.
    complex_field : numpy.ndarray or None
        Pre-magnitude field in the same layout, kept when requested.
    """

    kind: str
    magnitudes: np.ndarray
    source_dims: Tuple[int, int]
    complex_field: Optional[np.ndarray] = None

    @property
    def shape(self):
        return self.magnitudes.shape

    def value(self, m, n):
        """Magnitude at centered cell ``(m, n)``."""
        rows, cols = self.magnitudes.shape
        return self.magnitudes[n + rows // 2, m + cols // 2]

    def cell_of(self, row, col):
        rows, cols = self.magnitudes.shape
        return int(col - cols // 2), int(row - rows // 2)

    def argmax(self):
        """Centered ``(m, n)`` of the global maximum."""
        row, col = np.unravel_index(np.argmax(self.magnitudes), self.magnitudes.shape)
        return self.cell_of(row, col)


_EDGE = 1e-9   # tolerance for an alias frequency to sit on the band edge


def nvmt_dft(row, s, out_len=None, jacobian=True):
    """NVMT ``x' = s x`` followed by a DFT along ``x'``, along the last axis.

    Band-limited resampling of ``row`` onto the ``x'`` grid and a centered
    DFT of length ``W`` equals ``|s|`` times the scaled DFT summed over every
    alias ``m + q W`` whose frequency ``s (m + q W) / W`` lies in
    ``[-1/2, 1/2]``, aliases on the band edge counting half.  This
    periodicity in ``m`` is what wraps steep slopes to ``k - 2 q``.  Leading axes of ``row`` are transformed independently.
    ``jacobian=False`` leaves out the ``|s|`` factor.
    """
    row = np.asarray(row)
    w = row.shape[-1] if out_len is None else int(out_len)
    lead = row.shape[:-1]
    if s == 0:
        return np.zeros(lead + (w,), dtype=complex)
    q = int(np.ceil(0.5 / abs(s) + 0.5))  # one spare alias so both band edges are in
    g = scaled_dft(row, s, out_len=w * (2 * q + 1)).reshape(lead + (2 * q + 1, w))
    p = centered_indices(w)[None, :] + w * np.arange(-q, q + 1)[:, None]
    f = np.abs(s * p / w)
    # an alias exactly on the band edge +-1/2 has the same kernel as its
    # partner on the other edge; each gets half weight (symmetric in s)
    weight = np.where(f < 0.5 - _EDGE, 1.0, np.where(f <= 0.5 + _EDGE, 0.5, 0.0))
    g = (g * weight).sum(axis=-2)
    return abs(s) * g if jacobian else g


def funnel_field(img, half_spectrum=True, threads=1):
    """Complex regular-funnel field of an already expanded image.

    Steps: forward DFT along y per column; per frequency row ``l`` the NVMT
    with ``s = -2 l / H_e`` fused with the DFT along ``x'``
    (:func:`nvmt_dft`); inverse DFT along the frequency axis.  With
    ``half_spectrum`` only rows ``l >= 0`` are transformed and negative rows
    are conjugate copies.

    Returns a complex ``(H_e, W)`` array whose imaginary part is round-off.
    """
    img = np.asarray(img, dtype=float)
    he, w = img.shape
    spec = dft_axis(img, axis=0)                      # (l, x)
    s = -2.0 * centered_indices(he) / he
    row0 = he // 2                                    # array row of l = 0

    out = np.zeros((he, w), dtype=complex)
    rows = np.arange(row0 + 1, he) if half_spectrum else np.arange(he)
    rows = rows[rows != row0]

    def work(chunk):
        for r in chunk:
            out[r] = nvmt_dft(spec[r], s[r])

    chunks = _split(rows, threads)
    if len(chunks) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(len(chunks)) as pool:
            list(pool.map(work, chunks))
    else:
        work(rows)

    if half_spectrum:
        # G(m, -l) = conj(G(m, l)) for real input
        pos = np.arange(row0 + 1, he)
        neg = 2 * row0 - pos
        keep = neg >= 0
        out[neg[keep]] = np.conj(out[pos[keep]])
        if he % 2 == 0:
            out[0] = nvmt_dft(spec[0], s[0])
    if he % 2 == 0:
        # unpaired Nyquist row; its symmetric share is the real part
        out[0] = out[0].real
    return dft_axis(out, axis=0, direction="inverse")


def _split(rows, threads):
    threads = max(1, int(threads))
    if threads == 1 or len(rows) < 2 * threads:
        return [rows]
    return [c for c in np.array_split(rows, threads) if len(c)]


def _check_expanded(img, what):
    h, w = img.shape
    if h < w + 4:
        warnings.warn(
            f"{what} input of shape {img.shape} does not look expanded; "
            "intercepts beyond the image may wrap", ExpansionWarning, stacklevel=3)


def funnel_transform(img_expanded, source_dims=None, keep_complex=False,
                     half_spectrum=True, threads=1):
    """Regular parameter space of an image expanded along y.

    Parameters
    ----------
    img_expanded : array_like
        Output of :func:`~funnel_lines.imaging.expand_for_regular`.
    source_dims : tuple, optional
        ``(W, H)`` of the original image; inferred from the padding rule
        when omitted.
    keep_complex : bool
        Store the complex field on the result.
    half_spectrum : bool
        Use conjugate symmetry to transform only non-negative frequencies.
    threads : int
        Worker threads for the per-row scaled DFTs; output is identical for
        any value.
    """
    img = check_image(img_expanded)
    _check_expanded(img, "regular")
    he, w = img.shape
    if source_dims is None:
        source_dims = (w, he - 2 * (-(-w // 2)))
    field = funnel_field(img, half_spectrum=half_spectrum, threads=threads)
    return ParameterSpace(
        kind="regular",
        magnitudes=np.abs(field.real),
        source_dims=tuple(source_dims),
        complex_field=field if keep_complex else None,
    )


def inverse_funnel_transform(img_expanded, source_dims=None, keep_complex=False,
                             half_spectrum=True, threads=1):
    """Inverse parameter space of an image expanded along x.

    Equivalent to :func:`funnel_transform` of the transposed image with the
    axes swapped back, so ``magnitudes[n, m]`` has the x-intercept ``m`` on
    the columns and the inverse-slope index ``n`` on the rows.
    """
    img = check_image(img_expanded)
    t = transpose(img)
    _check_expanded(t, "inverse")
    h, we = img.shape
    if source_dims is None:
        source_dims = (we - 2 * (-(-h // 2)), h)
    field = transpose(funnel_field(t, half_spectrum=half_spectrum,
                                   threads=threads))
    return ParameterSpace(
        kind="inverse",
        magnitudes=np.abs(field.real),
        source_dims=tuple(source_dims),
        complex_field=field if keep_complex else None,
    )
