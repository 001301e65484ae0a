"""The same idea one dimension up: planes in a volume.

Run:  python3 demos/04_planes_in_3d.py

In a volume, a plane z = a x + b y + c collapses to a single bright cell
(m, n, l).  Here m and n encode the two slopes and l the offset.  A single
lit voxel goes the other way: it spreads out into a plane of cells.  This
mirrors the line/point duality of the 2-D transform.
"""

import numpy as np

from funnel_lines.funnel3d import PlaneModel, detect_plane, funnel3d, synth_plane, synth_point

dims = (32, 32, 32)
rng = np.random.default_rng(5)
print("planes in a 32^3 volume")
for _ in range(4):
    truth = PlaneModel(*rng.uniform(-0.9, 0.9, 2), rng.uniform(-6, 6))
    found = detect_plane(synth_plane(dims, truth))
    print(f"  true  a={truth.a:+.3f} b={truth.b:+.3f} c={truth.c:+.2f}   "
          f"found a={found.a:+.3f} b={found.b:+.3f} c={found.c:+.2f}")

mags = funnel3d(synth_point((16, 16, 16), 3, -2, 1))
support = (mags > 0.5 * mags.max()).sum()
print(f"\none voxel at (3, -2, 1) in a 16^3 volume lights {support} of {mags.size} cells,"
      f" i.e. one sheet of the (m, n, l) space")
