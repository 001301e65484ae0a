"""How much noise the detector can take.

Run:  python3 demos/03_noise_sweep.py

We add more and more noise to the star scene and count how many of the
eight lines survive.  With Gaussian noise, the variance is relative to a
line intensity of 1.  With salt-and-pepper noise, the level is the
fraction of pixels replaced.  Every level uses the same seed, so the
numbers come out the same each time.  The same sweeps are available from
the command line:

    funnel-lines experiment noise-sweep --noise gaussian --values 0,0.5,1,2
"""

from funnel_lines.experiments import noise_sweep

for variant, levels in (("gaussian", [0.0, 0.1, 0.5, 1.0, 2.0]),
                        ("salt_pepper", [0.0, 0.1, 0.3, 0.5, 0.7])):
    print(f"\n{variant} noise on the 8-line star (351 x 351)")
    print("  level   found  false   rho err   theta err")
    for row in noise_sweep(levels, variant=variant):
        print(f"  {row.sweep_value:5.2f}   {row.true_positives:3d}/8  {row.false_positives:4d}"
              f"   {row.mean_localization_error_rho_px:6.2f} px"
              f"  {row.mean_localization_error_theta_deg:6.2f} deg")

print("\nstep edges instead of thin lines (three edges, 512 x 512)")
for row in noise_sweep([0.0, 0.1], scene_name="step"):
    print(f"  gaussian {row.sweep_value:.1f}: {row.true_positives}/3 found, "
          f"{row.false_positives} false")
