"""Baseline reproduction number and the horizontal-lockdown intensity table.

The bundled parameterization is calibrated so that the unrestricted
reproduction number equals 2.854; uniform contact reduction then rescales it
linearly, which is what makes the horizontal strategy gradable.
"""

from strata import (CohortPartition, StrategicScale, apply_scale,
                    calibrate_baseline, compute_R0, load_params)

partition = CohortPartition()

raw = load_params()
print(f"uncalibrated R0 (digitized curves as shipped): {compute_R0(raw).r0:.4f}")

baseline = calibrate_baseline(raw, 2.854)
bk = compute_R0(baseline)
print(f"calibrated R0 = {bk.r0:.3f}")
print(f"  asymptomatic piece R_A = {bk.r_a:.4e}")
print(f"  symptomatic piece  R_I = {bk.r_i:.4e}")
print(f"  prefactor              = {bk.prefactor:.1f}")
print(f"  share through the symptomatic branch: "
      f"{bk.r_i / (bk.r_a + bk.r_i) * 100:.1f}%")

print("\nuniform contact reduction -> linear response")
print("a      reduction   R0")
for i in range(10):
    a = round(0.1 * i, 1)
    scale = StrategicScale(partition.all_cohorts, frozenset(), a, 1.0)
    r0 = compute_R0(apply_scale(scale, baseline, partition).applied).r0
    print(f"{a:<6.1f} {(1 - a) * 100:>6.0f}%   {r0:.3f}")
