"""Peak picking, line verification and the end-to-end detector."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage

from .funnel import ParameterSpace, funnel_transform, inverse_funnel_transform
from .imaging import check_image, expand_for_inverse, expand_for_regular
from .parammap import LineModel, PeakCell, peak_to_line, same_geometry

__all__ = [
    "DetectConfig",
    "Extent",
    "DetectedLine",
    "detect_peaks",
    "mask_boundary_artifacts",
    "border_lines",
    "verify_line",
    "estimate_extent",
    "parameter_spaces",
    "candidate_lines",
    "detect_lines",
]


@dataclass(frozen=True)
class DetectConfig:
    """Detector settings.

    Attributes
    ----------
    max_peaks : int
        Peaks kept per parameter space.
    threshold_ratio : float
        Peaks dimmer than this fraction of the brightest cell (over both
        spaces) are ignored.
    neighborhood : int
        Odd side of the square suppression window.
    band_width : int
        Odd width (3..7) of the verification band.
    verify_ratio : float
        Minimum band contrast, in units of the image standard deviation.
    mask_boundaries : bool
        Suppress the peaks of the artificial image borders.
    threads : int
        Worker threads (0 picks the CPU count).  Results do not depend on it.
    """

    max_peaks: int = 8
    threshold_ratio: float = 0.30
    neighborhood: int = 3
    band_width: int = 5
    verify_ratio: float = 1.0
    mask_boundaries: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.neighborhood < 3 or self.neighborhood % 2 == 0:
            raise ValueError("neighborhood must be odd and >= 3")
        if self.band_width not in (3, 5, 7):
            raise ValueError("band_width must be 3, 5 or 7")
        if self.max_peaks < 0:
            raise ValueError("max_peaks must be non-negative")
        if not 0 <= self.threshold_ratio <= 1:
            raise ValueError("threshold_ratio must lie in [0, 1]")

    @property
    def workers(self):
        import os
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)


@dataclass(frozen=True)
class Extent:
    endpoints: Tuple[Tuple[float, float], Tuple[float, float]]
    length: float
    width: int


@dataclass(frozen=True)
class DetectedLine:
    line: LineModel
    peak: PeakCell
    verified: bool
    score: float
    extent: Optional[Extent] = None


def detect_peaks(space, cfg=DetectConfig(), reference_max=None):
    """List-based peak detection.

    Cells are visited by decreasing brightness (ties by ``(m, n)``); a cell
    becomes a peak when none of its neighbors was visited before it.  The
    search stops after ``cfg.max_peaks`` peaks or at cells dimmer than
    ``cfg.threshold_ratio * reference_max`` (default: the space maximum).

    A cell is accepted exactly when it precedes all of its neighbors in the
    visiting order, so the scan is evaluated as a local-minimum test on the
    visiting rank.
    """
    mag = space.magnitudes
    rows, cols = mag.shape
    if cfg.max_peaks == 0 or mag.size == 0:
        return []
    top = mag.max() if reference_max is None else reference_max
    if top <= 0:
        return []
    n_idx, m_idx = np.indices(mag.shape)
    m_idx = m_idx - cols // 2
    n_idx = n_idx - rows // 2
    order = np.lexsort((n_idx.ravel(), m_idx.ravel(), -mag.ravel()))
    rank = np.empty(mag.size, dtype=np.int64)
    rank[order] = np.arange(mag.size)
    rank = rank.reshape(mag.shape)
    first = ndimage.minimum_filter(rank, size=cfg.neighborhood, mode="constant",
                                   cval=mag.size) == rank
    cand = np.flatnonzero(first.ravel())
    cand = cand[np.argsort(rank.ravel()[cand])]
    thr = cfg.threshold_ratio * top
    peaks = []
    for flat in cand:
        b = mag.flat[flat]
        if b < thr or b <= 0:
            break
        r, c = divmod(int(flat), cols)
        peaks.append(PeakCell(space.kind, c - cols // 2, r - rows // 2, float(b)))
        if len(peaks) == cfg.max_peaks:
            break
    return peaks


def _boundary_cells(kind, source_dims):
    """Centered cells straddling the two artificial border lines."""
    w, h = source_dims
    extent = h if kind == "regular" else w
    lo = -(extent // 2)                  # first image row (column)
    hi = lo + extent - 1                 # last image row (column)
    # each border is a step halfway between two cells
    return [(lo - 1, lo), (hi, hi + 1)]


def mask_boundary_artifacts(space, source_dims=None, size=3):
    """Zero the peaks produced by the borders of the zero-padded image.

    Regular space: the image's top and bottom edges (``k = 0``,
    ``b = -H/2, H/2``).  Inverse space: its left and right edges.  Each
    border occupies a two-cell doublet on the intercept axis; the block
    zeroed around it extends ``size // 2`` cells further on both axes.
    """
    source_dims = space.source_dims if source_dims is None else source_dims
    mag = space.magnitudes.copy()
    rows, cols = mag.shape
    h = size // 2
    for a, b in _boundary_cells(space.kind, source_dims):
        if space.kind == "regular":
            r0, r1 = a - h + rows // 2, b + h + rows // 2 + 1
            c0, c1 = -h + cols // 2, h + cols // 2 + 1
        else:
            c0, c1 = a - h + cols // 2, b + h + cols // 2 + 1
            r0, r1 = -h + rows // 2, h + rows // 2 + 1
        mag[max(r0, 0):max(r1, 0), max(c0, 0):max(c1, 0)] = 0.0
    return replace(space, magnitudes=mag, complex_field=None)


def border_lines(width, height):
    """The four steps between the image and its zero padding, as lines."""
    top, bottom = -(height // 2) - 0.5, height - 1 - height // 2 + 0.5
    left, right = -(width // 2) - 0.5, width - 1 - width // 2 + 0.5
    return [LineModel(0.0, top), LineModel(0.0, bottom),
            LineModel(0.0, left, inverse=True), LineModel(0.0, right, inverse=True)]


def _band_samples(img, line, band_width):
    """Nearest-pixel samples of a band centered on ``line``.

    Returns ``(band, t)``: samples ``(band_width, n_steps)`` with NaN outside
    the image, and the step parameters along the line.
    """
    h, w = img.shape
    x0, y0 = line.point()
    dx, dy = line.direction()
    nx, ny = -dy, dx
    # parameter range where the center line lies within the pixel-center box
    xmin, xmax = -(w // 2), w - 1 - w // 2
    ymin, ymax = -(h // 2), h - 1 - h // 2
    t_lo, t_hi = -np.inf, np.inf
    for p, d, lo, hi in ((x0, dx, xmin, xmax), (y0, dy, ymin, ymax)):
        if abs(d) < 1e-12:
            if not lo - 0.5 <= p <= hi + 0.5:
                return np.empty((band_width, 0)), np.empty(0)
            continue
        a, b = (lo - 0.5 - p) / d, (hi + 0.5 - p) / d
        t_lo, t_hi = max(t_lo, min(a, b)), min(t_hi, max(a, b))
    if not t_hi > t_lo:
        return np.empty((band_width, 0)), np.empty(0)
    t = np.arange(np.ceil(t_lo), np.floor(t_hi) + 1)
    offsets = np.arange(band_width) - band_width // 2
    px = x0 + t[None, :] * dx + offsets[:, None] * nx
    py = y0 + t[None, :] * dy + offsets[:, None] * ny
    col = np.rint(px).astype(int) + w // 2
    row = np.rint(py).astype(int) + h // 2
    inside = (col >= 0) & (col < w) & (row >= 0) & (row < h)
    out = np.full(px.shape, np.nan)
    out[inside] = img[row[inside], col[inside]]
    return out, t


def _masked_mean(a, axis):
    # NaN-aware mean that returns NaN (without a warning) for empty slices
    ok = np.isfinite(a)
    count = ok.sum(axis=axis)
    total = np.where(ok, a, 0.0).sum(axis=axis)
    return np.where(count > 0, total / np.maximum(count, 1), np.nan)


def verify_line(img, line, cfg=DetectConfig()):
    """Test a candidate line against the original image.

    Returns ``(verified, score, profile)``.  ``profile[o]`` is the mean
    intensity at perpendicular offset ``o`` of a ``cfg.band_width`` band;
    ``score`` is the largest jump between adjacent offsets divided by the
    image standard deviation.  Lines crossing the image in fewer than
    ``band_width`` samples are reported unverified with a NaN profile.
    """
    img = np.asarray(img, dtype=float)
    band, _ = _band_samples(img, line, cfg.band_width)
    center = band[cfg.band_width // 2] if band.size else band
    if np.count_nonzero(np.isfinite(center)) < cfg.band_width:
        return False, 0.0, np.full(cfg.band_width, np.nan)
    profile = _masked_mean(band, 1)
    sd = img.std()
    if sd == 0 or not np.all(np.isfinite(profile)):
        return False, 0.0, profile
    score = float(np.max(np.abs(np.diff(profile))) / sd)
    return score >= cfg.verify_ratio, score, profile


def _is_step(profile):
    """A step profile has different levels on its two sides; a ridge has not."""
    span = np.max(profile) - np.min(profile)
    return abs(profile[-1] - profile[0]) > 0.5 * span


def _line_trace(band, profile):
    """Per-step line strength along the candidate; about 0 where there is no line.

    Ridges: the strongest of the three central samples minus the median
    level of the two outermost offsets, so a candidate that is off by one
    pixel still sees its line.  Steps: the mean of the far side minus the
    mean of the near side.  The sign is chosen so that the line is
    positive; steps with a missing side give NaN.
    """
    c = band.shape[0] // 2
    if _is_step(profile):
        sign = 1.0 if profile[-1] >= profile[0] else -1.0
        return sign * (_masked_mean(band[c + 1:], 0) - _masked_mean(band[:c], 0))
    outer = np.concatenate([band[0], band[-1]])
    outer = outer[np.isfinite(outer)]
    level = np.median(outer) if outer.size else np.nanmin(profile)
    sign = 1.0 if profile[c] >= level else -1.0
    core = sign * (band[c - 1:c + 2] - level)
    core = np.where(np.isfinite(core), core, -np.inf).max(axis=0)
    return np.where(np.isfinite(core), core, np.nan)


def estimate_extent(img, line, cfg=DetectConfig()):
    """Endpoints, length and width of a verified line.

    The image is sampled in a window three band widths across, wide
    enough to see both sides of ridges up to that thickness.  The
    along-line trace (:func:`_line_trace`) is thresholded at half of its
    typical (90th percentile) strength; after closing gaps shorter than
    the window (where another line crosses), the longest run gives the endpoints.  Ridge width is
    the number of offsets whose mean intensity along the run lies beyond
    the midpoint of the profile; a step edge reports the number of offset
    pairs carrying at least half of the largest jump (1 for a sharp edge).

    Returns
    -------
    endpoints : tuple
        ``((x, y), (x, y))`` in centered pixel coordinates.
    length : float
        Number of unit steps in the run.
    width : int
    """
    img = np.asarray(img, dtype=float)
    window = 3 * cfg.band_width
    band, t = _band_samples(img, line, window)
    c = window // 2
    valid = np.isfinite(band[c]) if band.size else np.zeros(0, dtype=bool)
    if not valid.any():
        raise ValueError("line does not cross the image")
    band, t = band[:, valid], t[valid]
    profile = _masked_mean(band, 1)
    if not np.all(np.isfinite(profile)) or np.ptp(profile) == 0:
        raise ValueError("no line run found along the candidate")
    trace = _line_trace(band, profile)
    trace = np.where(np.isfinite(trace), trace, 0.0)
    peak = np.percentile(trace, 90)
    if peak <= 0:
        raise ValueError("no line run found along the candidate")
    on = trace >= 0.5 * peak
    pad = window
    closed = ndimage.binary_closing(np.pad(on, pad), structure=np.ones(pad, dtype=bool))
    on = closed[pad:-pad] | on
    labels, count = ndimage.label(on)
    sizes = ndimage.sum(on, labels, index=np.arange(1, count + 1))
    best = int(np.argmax(sizes)) + 1
    idx = np.flatnonzero(labels == best)

    x0, y0 = line.point()
    dx, dy = line.direction()
    ta, tb = t[idx[0]], t[idx[-1]]
    ends = ((x0 + ta * dx, y0 + ta * dy), (x0 + tb * dx, y0 + tb * dy))
    length = float(tb - ta + 1)

    run = _masked_mean(band[:, idx], 1)
    if _is_step(profile):
        jumps = np.abs(np.diff(run))
        width = int(np.count_nonzero(jumps >= 0.5 * np.nanmax(jumps)))
    else:
        level = np.median(np.concatenate([run[:2], run[-2:]]))
        sign = 1.0 if run[c] >= level else -1.0
        rel = sign * (run - level)
        width = int(np.count_nonzero(rel > 0.5 * np.nanmax(rel)))
    return ends, length, width


def parameter_spaces(img, cfg=DetectConfig()):
    """Regular and inverse parameter spaces of ``img`` (boundaries masked per cfg)."""
    img = check_image(img)
    h, w = img.shape
    jobs = (
        (funnel_transform, expand_for_regular(img)),
        (inverse_funnel_transform, expand_for_inverse(img)),
    )
    workers = cfg.workers
    per = max(1, workers // 2)
    if workers > 1:
        with ThreadPoolExecutor(2) as pool:
            futs = [pool.submit(f, e, (w, h), threads=per) for f, e in jobs]
            spaces = [f.result() for f in futs]
    else:
        spaces = [f(e, (w, h)) for f, e in jobs]
    if cfg.mask_boundaries:
        spaces = [mask_boundary_artifacts(s, size=cfg.neighborhood) for s in spaces]
    return spaces


def candidate_lines(img, cfg=DetectConfig(), spaces=None):
    """Unverified candidates from both spaces, brightest first.

    With ``cfg.mask_boundaries`` candidates lying along one of the padding
    borders (:func:`border_lines`) are dropped as well: the masked block
    only covers the border's own cell, while partial border steps of a
    textured image smear a few cells further.
    """
    img = check_image(img)
    h, w = img.shape
    if spaces is None:
        spaces = parameter_spaces(img, cfg)
    top = max(float(s.magnitudes.max()) for s in spaces)
    borders = border_lines(w, h) if cfg.mask_boundaries else []
    out = []
    for sp in spaces:
        for cell in detect_peaks(sp, cfg, reference_max=top):
            line = peak_to_line(cell, w, h)
            if any(same_geometry(line, b) for b in borders):
                continue
            out.append((line, cell))
    out.sort(key=lambda lc: (-lc[1].brightness, lc[1].space, lc[1].m, lc[1].n))
    return out


def detect_lines(img, cfg=DetectConfig(), with_extent=True):
    """Detect straight lines in a grayscale image.

    Both parameter spaces are searched for peaks, every candidate is
    verified against ``img``, unverified ones (wrapping aliases, false
    peaks) are dropped, duplicates of one physical line are merged keeping
    the better score, and the result is sorted by decreasing score.
    """
    img = check_image(img)
    found: List[DetectedLine] = []
    for line, cell in candidate_lines(img, cfg):
        ok, score, _ = verify_line(img, line, cfg)
        if not ok:
            continue
        extent = None
        if with_extent:
            try:
                extent = Extent(*estimate_extent(img, line, cfg))
            except ValueError:
                extent = None
        found.append(DetectedLine(line, cell, True, score, extent))
    found.sort(key=lambda d: (-d.score, d.peak.space, d.peak.m, d.peak.n))
    kept: List[DetectedLine] = []
    for d in found:
        if not any(same_geometry(d.line, k.line) for k in kept):
            kept.append(d)
    return kept

