"""Centered 1D DFTs and the chirp-z scaled DFT.

All transforms here use *centered* indexing: a length ``n`` axis holds
positions ``-(n // 2) ... (n - 1) // 2`` with position 0 stored at array
index ``n // 2``.  Frequency axes follow the same layout (``fftshift``).
"""

import numpy as np

__all__ = ["centered_indices", "dft_axis", "scaled_dft", "next_pow2"]


def centered_indices(n):
    """Integer positions ``-(n // 2) .. (n - 1) // 2`` of a centered axis."""
    return np.arange(n) - n // 2


def next_pow2(n):
    return 1 << max(0, int(n - 1).bit_length())


def dft_axis(field, axis=-1, direction="forward"):
    """Centered DFT of every vector along ``axis``.

    Forward uses ``exp(-j 2 pi l y / n)`` without scaling; the inverse uses
    ``exp(+j 2 pi l y / n) / n``, so ``inverse(forward(f)) == f``.
    """
    field = np.asarray(field)
    if direction == "forward":
        f = np.fft.fft
    elif direction == "inverse":
        f = np.fft.ifft
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    shifted = np.fft.ifftshift(field, axes=axis)
    return np.fft.fftshift(f(shifted, axis=axis), axes=axis)


def scaled_dft(x, s, out_len=None, axis=-1):
    """Scaled DFT of centered vectors via Bluestein's chirp factorization.

    Computes ::

        G[m] = sum_n x[n] * exp(-j * (2 pi / N) * s * m * n)

    over centered ``n`` (``N = x.shape[axis]``) and centered ``m``
    (``out_len`` samples, default ``N``).  For ``s = 1`` this is the
    ordinary centered DFT, for ``s = 0`` every output equals ``sum(x)``.

    Parameters
    ----------
    x : array_like
        Input samples; any number of leading/trailing axes.
    s : float or array_like
        Scale in ``[-1, 1]``.  An array must broadcast against ``x`` with
        the transformed axis removed, which allows one scale per row.
    out_len : int, optional
        Number of centered output frequencies.
    axis : int
        Axis to transform.

    Returns
    -------
    numpy.ndarray
        Complex array, ``x.shape`` with ``axis`` resized to ``out_len``.
    """
    x = np.moveaxis(np.asarray(x, dtype=complex), axis, -1)
    n_in = x.shape[-1]
    n_out = n_in if out_len is None else int(out_len)
    s = np.asarray(s, dtype=float)
    if np.any(np.abs(s) > 1.0):
        raise ValueError("scale |s| must not exceed 1")
    s = s[..., None]

    n = centered_indices(n_in).astype(float)
    m = centered_indices(n_out).astype(float)
    # m*n = (m^2 + n^2 - (m - n)^2) / 2
    w = np.pi * s / n_in
    pre = np.exp(-1j * w * n**2)
    post = np.exp(-1j * w * m**2)

    # lags m - n span [m_min - n_max, m_max - n_min]
    lag0 = m[0] - n[-1]
    lags = lag0 + np.arange(n_in + n_out - 1)
    chirp = np.exp(1j * w * lags**2)

    p = next_pow2(n_in + n_out - 1)
    a = np.fft.fft(x * pre, p)
    b = np.fft.fft(chirp, p)
    conv = np.fft.ifft(a * b)
    # output m sits at lag offset (m - n[0]) - lag0 = k + n_in - 1
    out = post * conv[..., n_in - 1:n_in - 1 + n_out]
    return np.moveaxis(out, -1, axis)
