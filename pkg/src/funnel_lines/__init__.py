"""Straight-line detection in grayscale images with the funnel transform.

A line ``y = k x + b`` (``|k| <= 1``) of a zero-padded image becomes a
single bright cell of the *regular* parameter space; steeper lines,
written ``x = k' y + b'``, peak in the *inverse* space.  Candidates from
both spaces are checked against the image itself, which removes the
aliases that Fourier periodicity creates.

Typical use::

    from funnel_lines import detect_lines, DetectConfig
    lines = detect_lines(image, DetectConfig(max_peaks=8))
"""

from .detect import (DetectConfig, DetectedLine, Extent, candidate_lines, detect_lines,
                     detect_peaks, estimate_extent, mask_boundary_artifacts,
                     parameter_spaces, verify_line)
from .funnel import ParameterSpace, funnel_transform, inverse_funnel_transform
from .imaging import (NoiseModel, apply_noise, expand_for_inverse, expand_for_regular,
                      occlude_disk, synth_line)
from .parammap import (LineModel, PeakCell, line_to_peak, line_to_rho_theta, peak_to_line,
                       same_geometry, wrap_intercept, wrap_slope)

__version__ = "0.1.0"

__all__ = [
    "DetectConfig", "DetectedLine", "Extent", "candidate_lines", "detect_lines",
    "detect_peaks", "estimate_extent", "mask_boundary_artifacts", "parameter_spaces",
    "verify_line", "ParameterSpace", "funnel_transform", "inverse_funnel_transform",
    "NoiseModel", "apply_noise", "expand_for_inverse", "expand_for_regular",
    "occlude_disk", "synth_line", "LineModel", "PeakCell", "line_to_peak",
    "line_to_rho_theta", "peak_to_line", "same_geometry", "wrap_intercept", "wrap_slope",
]
