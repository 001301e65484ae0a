"""Funnel transform of volumes: planes ``z = a x + b y + c`` to points.

Volumes are arrays ``vol[z, y, x]`` with centered coordinates on every
axis, exactly like images.  The parameter field is stored as
``field[l, n, m]``: ``m`` indexes ``a``, ``n`` indexes ``b`` and ``l`` is
the intercept ``c``.  Only planes with ``|a|, |b| <= 1`` are covered.
"""

from dataclasses import dataclass

import numpy as np

from .funnel import nvmt_dft
from .spectral import centered_indices, dft_axis

__all__ = [
    "PlaneModel",
    "check_volume",
    "synth_plane",
    "synth_point",
    "expand_volume",
    "funnel3d_field",
    "funnel3d",
    "peak_to_plane",
    "plane_to_peak",
    "detect_plane",
]

MIN_SIZE = 4


@dataclass(frozen=True)
class PlaneModel:
    """Plane ``z = a x + b y + c`` in centered voxel coordinates."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not all(np.isfinite((self.a, self.b, self.c))):
            raise ValueError("plane parameters must be finite")
        if abs(self.a) > 1 or abs(self.b) > 1:
            raise ValueError("only planes with |a|, |b| <= 1 are supported")


def check_volume(vol):
    vol = np.asarray(vol, dtype=float)
    if vol.ndim != 3:
        raise ValueError(f"expected a 3D volume, got shape {vol.shape}")
    if min(vol.shape) < MIN_SIZE:
        raise ValueError(f"every dimension must be >= {MIN_SIZE}, got {vol.shape}")
    if not np.all(np.isfinite(vol)):
        raise ValueError("volume contains non-finite values")
    return vol


def _grid3(dims):
    nx, ny, nz = dims
    z, y, x = np.meshgrid(centered_indices(nz), centered_indices(ny),
                          centered_indices(nx), indexing="ij")
    return x, y, z


def synth_plane(dims, plane, amplitude=1.0):
    """Voxel raster of a plane: ``-1/2 <= z - a x - b y - c < 1/2`` lit.

    The half-open interval lights exactly one voxel in every ``(x, y)``
    column the plane passes through, also where the plane sits exactly
    halfway between two voxels.  ``dims`` is ``(Nx, Ny, Nz)``; the result
    has shape ``(Nz, Ny, Nx)``.
    """
    if min(dims) < MIN_SIZE:
        raise ValueError(f"every dimension must be >= {MIN_SIZE}")
    x, y, z = _grid3(dims)
    d = z - plane.a * x - plane.b * y - plane.c
    lit = (d >= -0.5) & (d < 0.5)
    return np.where(lit, float(amplitude), 0.0)


def synth_point(dims, x0, y0, z0, amplitude=1.0):
    """Volume with a single lit voxel at centered ``(x0, y0, z0)``."""
    nx, ny, nz = dims
    vol = np.zeros((nz, ny, nx))
    vol[z0 + nz // 2, y0 + ny // 2, x0 + nx // 2] = amplitude
    return vol


def expand_volume(vol):
    """Zero-pad ``ceil(max(Nx, Ny) / 2)`` slabs above and below along z."""
    vol = check_volume(vol)
    nz, ny, nx = vol.shape
    pad = -(-max(nx, ny) // 2)
    return np.pad(vol, ((pad, pad), (0, 0), (0, 0)))


def funnel3d_field(vol):
    """Complex parameter field of an already expanded volume.

    Forward DFT along z; on each frequency slab ``l`` the NVMT with scale
    ``s = -2 l / Nz_e`` fused with a DFT, first along x and then along y;
    inverse DFT along ``l``.  Only the x pass carries the ``|s|`` weight, so
    the slab weighting is the same first-order high-pass as in 2D; with
    ``s^2`` the peak profile along ``l`` grows sidelobes of about 0.6 that
    split the peaks of planes with fractional intercepts.  Slabs with ``l < 0`` are conjugates of their
    mirror slabs, and for even ``Nz_e`` the unpaired slab keeps its real
    part.  Returns a complex ``(Nz_e, Ny, Nx)`` array.
    """
    vol = check_volume(vol)
    nze, ny, nx = vol.shape
    spec = dft_axis(vol, axis=0)
    s = -2.0 * centered_indices(nze) / nze
    row0 = nze // 2
    out = np.zeros(vol.shape, dtype=complex)

    def slab(r):
        g = nvmt_dft(spec[r], s[r])                       # along x: (y, m)
        g = nvmt_dft(g.T, s[r], jacobian=False).T         # along y: (n, m)
        return g

    for r in range(row0 + 1, nze):
        out[r] = slab(r)
        mirror = 2 * row0 - r
        if mirror >= 0:
            out[mirror] = np.conj(out[r])
    if nze % 2 == 0:
        out[0] = slab(0).real
    return dft_axis(out, axis=0, direction="inverse")


def funnel3d(vol, expanded=False):
    """Magnitude parameter field ``|Re F[l, n, m]|`` of a volume.

    Parameters
    ----------
    vol : array_like
        Volume ``vol[z, y, x]``.
    expanded : bool
        Whether ``vol`` already carries the z padding of
        :func:`expand_volume`.

    Returns
    -------
    numpy.ndarray
        Field of shape ``(Nz_e, Ny, Nx)``; a plane peaks at the centered
        cell ``(m, n, l) = (a Nx / 2, b Ny / 2, c)``.
    """
    vol = check_volume(vol)
    if not expanded:
        vol = expand_volume(vol)
    return np.abs(funnel3d_field(vol).real)


def _centered_argmax(field):
    idx = np.unravel_index(np.argmax(field), field.shape)
    l, n, m = (int(i) - d // 2 for i, d in zip(idx, field.shape))
    return m, n, l


def peak_to_plane(m, n, l, nx, ny, nz_e=None):
    """Plane of the centered peak cell ``(m, n, l)``: ``a = 2m/Nx``, ``b = 2n/Ny``, ``c = l``."""
    for v, size, what in ((m, nx, "m"), (n, ny, "n")):
        if not -(size // 2) <= v <= (size - 1) // 2:
            raise ValueError(f"{what} index {v} out of range for size {size}")
    if nz_e is not None and not -(nz_e // 2) <= l <= (nz_e - 1) // 2:
        raise ValueError(f"l index {l} out of range for size {nz_e}")
    return PlaneModel(2.0 * m / nx, 2.0 * n / ny, float(l))


def plane_to_peak(plane, nx, ny):
    """Nearest centered cell ``(m, n, l)`` at which ``plane`` peaks."""
    return (int(round(plane.a * nx / 2)), int(round(plane.b * ny / 2)),
            int(round(plane.c)))


def detect_plane(vol):
    """Plane of the brightest cell of :func:`funnel3d` (one-plane volumes)."""
    vol = check_volume(vol)
    nz, ny, nx = vol.shape
    field = funnel3d(vol)
    m, n, l = _centered_argmax(field)
    return peak_to_plane(m, n, l, nx, ny, field.shape[0])
