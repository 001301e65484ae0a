"""Finding the eight spokes of a star, with a hole punched in the middle.

Run:  python3 demos/01_star_detection.py [output_dir]

The scene has eight one-pixel lines through the image center, 22.5 degrees
apart.  Half of them are shallow (|slope| <= 1) and show up in the regular
parameter space.  The other half are steep and show up in the inverse
space.  We then cover the center with a disk, so that none of the lines
meet, and run the detector again.  Each line is still a straight run of
bright pixels, and each run still adds up to one peak.
"""

import sys
from pathlib import Path

from funnel_lines import DetectConfig, detect_lines, parameter_spaces
from funnel_lines.io import draw_overlay, render_heatmap, save_image
from funnel_lines.scenes import star_scene

out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out_dir.mkdir(exist_ok=True)

for diameter in (0, 129):
    img, truth = star_scene(351, occlusion=diameter)
    print(f"\n--- star, occluding disk of diameter {diameter} px ---")

    # One peak per space and line: the detector reports its best candidates
    # from each space, then keeps only the ones that show up in the image.
    found = detect_lines(img, DetectConfig(max_peaks=len(truth)))
    for det in found:
        line = det.line
        kind = "x = k'y + b'" if line.inverse else "y = kx + b"
        extent = det.extent
        length = f"{extent.length:6.1f} px" if extent else "   n/a"
        print(f"  {kind:13s} k={line.slope:+.3f} b={line.intercept:+6.2f}  "
              f"score={det.score:.2f}  longest visible run {length}")
    print(f"  {len(found)} of {len(truth)} lines recovered")

    regular, inverse = parameter_spaces(img)
    save_image(out_dir / f"star_d{diameter}_input.png", img)
    save_image(out_dir / f"star_d{diameter}_regular.png", render_heatmap(regular.magnitudes, log=True))
    save_image(out_dir / f"star_d{diameter}_inverse.png", render_heatmap(inverse.magnitudes, log=True))
    draw_overlay(img, found).save(out_dir / f"star_d{diameter}_overlay.png")

print(f"\nimages written to {out_dir}/")
