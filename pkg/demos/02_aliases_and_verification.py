"""Why every candidate is checked against the image.

Run:  python3 demos/02_aliases_and_verification.py

A line 73 degrees from the x axis is too steep for the regular space.
Its true home is the inverse space, where it becomes one clean peak.
The regular space still shows a bright cell for it, though.  The spectrum
is periodic, so a slope of 3.27 wraps around to 3.27 - 4 = -0.73, and the
line turns up there as a ghost with the wrong slope.

Both peaks are decoded and tested on the image.  We sample a thin band
along each candidate and compare it with bands on either side.  The ghost
runs through empty background and is rejected.  The true line is kept.
"""

import math

from funnel_lines import (DetectConfig, PeakCell, parameter_spaces, peak_to_line, synth_line,
                          verify_line, wrap_slope)

W, H = 170, 428
inv_slope = 1 / math.tan(math.radians(73))          # x = 0.306 y + 18
img = synth_line(W, H, inv_slope, 18.0, inverse=True)
print(f"image {W}x{H}, one line x = {inv_slope:.3f} y + 18")
print(f"as y = kx + b its slope is {1 / inv_slope:.2f}; that wraps to "
      f"{wrap_slope(1 / inv_slope).wrapped_value:+.2f} in the regular space\n")

regular, inverse = parameter_spaces(img)
cfg = DetectConfig()
for name, space in (("inverse", inverse), ("regular", regular)):
    m, n = space.argmax()
    line = peak_to_line(PeakCell(name, m, n), W, H)
    ok, score, _ = verify_line(img, line, cfg)
    print(f"{name:8s} space: brightest cell (m={m:+d}, n={n:+d}) -> "
          f"k={line.slope:+.4f}, b={line.intercept:+.1f}; "
          f"edge score {score:.2f} -> {'KEPT' if ok else 'rejected'}")
