"""Cohort-targeted scales: applying, recovering, horizontal vs age-targeted.

A configuration is a pair of cohort subsets plus intensities (a, b): contact
reduction multiplies transmission by a on the targeted cohorts, testing
multiplies the symptomatic removal rate by 1/b.  As long as the baseline's
intervention triple never vanishes simultaneously, the scale is uniquely
recoverable from the scaled parameter set.
"""

from strata import (CohortPartition, StrategicScale, apply_scale,
                    calibrate_baseline, compute_R0, is_horizontal, load_catalog,
                    load_params, recover_scale, rho)

partition = CohortPartition()
baseline = calibrate_baseline(load_params(), 2.854)

print("cohorts:")
for j in range(partition.n):
    print(f"  {j + 1}: ages {partition.boundaries[j]:>2.0f}-"
          f"{partition.boundaries[j + 1]:<2.0f} ({partition.labels[j]})")

# an 80 percent contact reduction on the 1st and 3rd cohorts
print("\nrho for W = {1, 3}, a = 1/5:")
for age in (3, 10, 20, 40, 70):
    print(f"  age {age:>2}: multiplier {rho({1, 3}, 1 / 5, age, partition):.1f}")

scale = StrategicScale(frozenset({1, 3}), frozenset(), 1 / 5, 1.0)
element = apply_scale(scale, baseline, partition)
print(f"resulting R0: {compute_R0(element.applied).r0:.3f} (baseline 2.854)")

recovered = recover_scale(element, baseline, partition)
print(f"recovered scale: W_beta = {sorted(recovered.w_beta)}, a = {recovered.a}")

print("\nhorizontal or age-targeted?")
for w_beta, w_gamma in ((frozenset(range(1, 6)), frozenset()),
                        (frozenset({1, 2, 3}), frozenset({4, 5})),
                        (frozenset(), frozenset())):
    s = StrategicScale(w_beta, w_gamma, 0.5, 0.5)
    kind = "horizontal" if is_horizontal(s, partition) else "age-targeted"
    print(f"  W_beta = {sorted(w_beta) or '{}'}, W_gamma = {sorted(w_gamma) or '{}'}: {kind}")

print("\nbundled catalog of age-targeted configurations:")
for sub in load_catalog()[:4]:
    print(f"  {sub.index:>2}. {sub.name}")
print("  ... (16 in total)")
