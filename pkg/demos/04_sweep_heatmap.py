"""Grid sweep of R0 over intensity space, exported as CSV (and PNG if
matplotlib is available).

Axes follow the display convention: contact-reduction intensity as a*100%
and the testing axis as the detection day b*14.
"""

from strata import calibrate_baseline, load_catalog, load_params, sweep_grid

baseline = calibrate_baseline(load_params(), 2.854)
sub = load_catalog()[0]   # contact reduction on cohorts 1-3, testing on 4-5
print(f"sweeping: {sub.name}")

grid = sweep_grid(sub, baseline, 64, 64)
print(f"grid monotone in both axes: {grid.is_monotone()}")
print(f"corner (a=1, day 14) = baseline: {grid.r0[-1][-1]:.3f}")
print(f"corner (a=0, day 1): {grid.r0[0][0]:.3f}")

with open("sweep_row1.csv", "w") as fh:
    fh.write(grid.to_csv())
print("wrote sweep_row1.csv")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    fig, ax = plt.subplots(figsize=(7, 5))
    mesh = ax.pcolormesh(grid.detection_days, grid.a_percent,
                         np.asarray(grid.r0), shading="auto", cmap="viridis")
    cs = ax.contour(grid.detection_days, grid.a_percent, np.asarray(grid.r0),
                    levels=[0.571, 1.427, 2.283], colors="white", linewidths=1.2)
    ax.clabel(cs, fmt={0.571: "H", 1.427: "M", 2.283: "L"})
    ax.set_xlabel("detection day of targeted cohorts")
    ax.set_ylabel("contact intensity a (%)")
    ax.set_title(sub.name)
    fig.colorbar(mesh, label="R0")
    fig.tight_layout()
    fig.savefig("sweep_row1.png", dpi=150)
    print("wrote sweep_row1.png")
except ImportError:
    print("matplotlib not installed; skipped the PNG rendering")
