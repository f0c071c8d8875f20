import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strata import (AgeProfile, ConvergenceError, DomainError, HazardAccumulator,
                    cumulative_hazard, eval_profile, survival_weighted_integral)
from strata.params import (DAYS_PER_YEAR, default_chi_profile, default_k_profile)

MU = 4.38356e-5


def brute_force_integral(weight, acc, s_max=2000.0, n_per_seg=60_000):
    """Independent oracle: dense midpoint rule per smooth segment.

    Splitting at the union of breakpoints keeps every jump at a segment
    boundary; the cumulative hazard comes from the accumulator, which is
    itself checked against plain quadrature elsewhere.
    """
    cuts = sorted({0.0, s_max, *(x for x in acc.mesh if x < s_max),
                   *(x for x in weight.breakpoints if x < s_max)})
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        xs = np.linspace(lo, hi, n_per_seg + 1)
        mids = 0.5 * (xs[1:] + xs[:-1])
        vals = np.asarray(weight(mids)) * np.exp(-np.asarray(acc.cumulative_at(mids)))
        total += float(np.sum(vals * np.diff(xs)))
    return total


# -- eval_profile ---------------------------------------------------------

def test_chi_value_at_35_years():
    chi = default_chi_profile()
    assert eval_profile(chi, 35 * 360) == pytest.approx(1 / 5.8, rel=1e-12)


def test_constant_profile_everywhere():
    prof = AgeProfile.constant(0.37)
    for age in (0.0, 1.0, 5000.0, 1e7):
        assert eval_profile(prof, age) == 0.37


def test_k_right_continuous_at_30_years():
    k = default_k_profile()
    assert eval_profile(k, 30 * 360) == pytest.approx(1 / 4.8, rel=1e-12)
    assert eval_profile(k, 30 * 360 - 1e-9) == pytest.approx(1 / 4, rel=1e-12)


def test_negative_age_rejected():
    with pytest.raises(DomainError):
        eval_profile(default_k_profile(), -1.0)


def test_linear_profile_interpolates():
    prof = AgeProfile.from_nodes([0.0, 10.0, 20.0], [0.0, 1.0, 3.0])
    assert prof(5.0) == pytest.approx(0.5)
    assert prof(15.0) == pytest.approx(2.0)
    assert prof(99.0) == 3.0   # constant extension


def test_breakpoints_must_start_at_zero():
    with pytest.raises(DomainError):
        AgeProfile.from_steps([1.0, 2.0], [0.5, 0.5])
    with pytest.raises(DomainError):
        AgeProfile.from_steps([0.0, 2.0, 2.0], [1.0, 1.0, 1.0])


def test_json_round_trip():
    for prof in (AgeProfile.constant(2.5, "1/day"),
                 default_k_profile(),
                 AgeProfile.from_nodes([0, 5, 30], [1.0, 2.0, 0.5])):
        again = AgeProfile.from_json(prof.to_json())
        assert again == prof


# -- cumulative_hazard ----------------------------------------------------

def test_constant_hazard_is_linear():
    acc = HazardAccumulator.of([AgeProfile.constant(0.3)])
    for s in (0.0, 1.0, 7.5, 1234.0):
        assert cumulative_hazard(acc, s) == pytest.approx(0.3 * s, rel=1e-14)


def test_k_plus_mu_first_segment():
    # hand antiderivative on the first constant segment
    acc = HazardAccumulator.of([default_k_profile(), AgeProfile.constant(MU)])
    assert cumulative_hazard(acc, 10.0) == pytest.approx((0.25 + MU) * 10.0, rel=1e-13)


def test_zero_length_integral():
    acc = HazardAccumulator.of([default_k_profile()])
    assert cumulative_hazard(acc, 0.0) == 0.0


def test_cumulative_additivity():
    rng = np.random.default_rng(7)
    prof = AgeProfile.from_steps([0, 3, 11, 40], rng.uniform(0.05, 2.0, 4))
    lin = AgeProfile.from_nodes([0, 5, 25], rng.uniform(0.05, 2.0, 3))
    acc = HazardAccumulator.of([prof, lin])
    for _ in range(50):
        s1, s2 = rng.uniform(0, 60, 2)
        whole = cumulative_hazard(acc, s1 + s2)
        split = cumulative_hazard(acc, s1) + (cumulative_hazard(acc, s1 + s2)
                                              - cumulative_hazard(acc, s1))
        assert whole == pytest.approx(split, rel=1e-12)
        # against an independent quadrature, split at the jumps
        cuts = [x for x in acc.mesh if 0.0 < x < s1]
        approx = 0.0
        for lo, hi in zip([0.0] + cuts, cuts + [s1]):
            xs = np.linspace(lo, hi, 5001)
            mids = 0.5 * (xs[1:] + xs[:-1])
            approx += float(np.sum(np.asarray(acc.hazard_right_of(mids)) * np.diff(xs)))
        assert cumulative_hazard(acc, s1) == pytest.approx(approx, rel=1e-6, abs=1e-9)


def test_hazard_quadratic_between_breakpoints():
    # linear integrand -> quadratic cumulative
    lin = AgeProfile.from_nodes([0.0, 10.0], [0.0, 2.0])   # slope 0.2
    acc = HazardAccumulator.of([lin])
    assert cumulative_hazard(acc, 4.0) == pytest.approx(0.5 * 0.2 * 16.0, rel=1e-13)


def test_negative_s_rejected():
    acc = HazardAccumulator.of([AgeProfile.constant(1.0)])
    with pytest.raises(DomainError):
        cumulative_hazard(acc, -0.5)


# -- survival_weighted_integral --------------------------------------------

def test_constant_closed_form_kq():
    k, q, mu = 0.25, 0.46, MU
    weight = AgeProfile.constant(k * q)
    acc = HazardAccumulator.of([AgeProfile.constant(k + mu)])
    expected = k * q / (k + mu)
    assert survival_weighted_integral(weight, acc, 1e-10) == pytest.approx(expected, rel=1e-10)


def test_constant_closed_form_beta():
    beta, gamma_a, chi, xi, mu = 3.2e-8, 1 / 8, 1 / 5, 0.5, MU
    h = gamma_a * xi + chi * (1 - xi) + mu
    weight = AgeProfile.constant(beta)
    acc = HazardAccumulator.of([AgeProfile.constant(h)])
    assert survival_weighted_integral(weight, acc, 1e-10) == pytest.approx(beta / h, rel=1e-10)


def test_zero_weight():
    acc = HazardAccumulator.of([AgeProfile.constant(0.5)])
    assert survival_weighted_integral(AgeProfile.constant(0.0), acc, 1e-8) == 0.0


@settings(max_examples=120, deadline=None)
@given(w=st.floats(min_value=1e-3, max_value=10.0),
       h=st.floats(min_value=1e-3, max_value=10.0))
def test_constant_exactness_property(w, h):
    weight = AgeProfile.constant(w)
    acc = HazardAccumulator.of([AgeProfile.constant(h)])
    assert survival_weighted_integral(weight, acc, 1e-9) == pytest.approx(w / h, rel=1e-9)


def test_constant_exactness_thousand_randomized():
    rng = np.random.default_rng(1234)
    for _ in range(1000):
        w = rng.uniform(1e-6, 10.0)
        h = rng.uniform(1e-6, 10.0)
        got = survival_weighted_integral(AgeProfile.constant(w),
                                         HazardAccumulator.of([AgeProfile.constant(h)]),
                                         1e-8)
        assert math.isclose(got, w / h, rel_tol=1e-8)


def _random_piecewise(rng, lo=0.02, hi=2.0):
    n = rng.integers(2, 6)
    bps = np.concatenate([[0.0], np.sort(rng.uniform(1.0, 80.0, n - 1))])
    if rng.random() < 0.5:
        return AgeProfile.from_steps(bps, rng.uniform(lo, hi, n))
    return AgeProfile.from_nodes(bps, rng.uniform(lo, hi, n))


def test_piecewise_against_brute_force():
    rng = np.random.default_rng(42)
    for _ in range(25):
        weight = _random_piecewise(rng)
        hazard = _random_piecewise(rng, lo=0.05, hi=1.0)
        acc = HazardAccumulator.of([hazard])
        got = survival_weighted_integral(weight, acc, 1e-10)
        ref = brute_force_integral(weight, acc)
        assert got == pytest.approx(ref, rel=5e-7)


def test_mesh_refinement_convergence():
    # splitting a profile's segments in half must not change the value
    rng = np.random.default_rng(3)
    weight = _random_piecewise(rng)
    hazard = _random_piecewise(rng, lo=0.05, hi=1.0)
    acc = HazardAccumulator.of([hazard])
    coarse = survival_weighted_integral(weight, acc, 1e-9)
    bps = np.asarray(weight.breakpoints)
    mids = 0.5 * (bps[:-1] + bps[1:])
    fine = survival_weighted_integral(weight.refined(mids), acc, 1e-9)
    assert fine == pytest.approx(coarse, rel=1e-9)


def test_hazard_monotonicity():
    rng = np.random.default_rng(99)
    for _ in range(20):
        weight = _random_piecewise(rng)
        hazard = _random_piecewise(rng, lo=0.05, hi=1.0)
        bump = _random_piecewise(rng, lo=0.0, hi=0.5)
        low = HazardAccumulator.of([hazard])
        high = HazardAccumulator.of([hazard, bump])
        i_low = survival_weighted_integral(weight, low, 1e-10)
        i_high = survival_weighted_integral(weight, high, 1e-10)
        assert i_high <= i_low * (1 + 1e-12)


def test_bounded_hazard_raises():
    weight = AgeProfile.constant(1.0)
    dying = AgeProfile.from_steps([0.0, 5.0], [0.3, 0.0])   # hazard vanishes after 5
    with pytest.raises(ConvergenceError):
        survival_weighted_integral(weight, HazardAccumulator.of([dying]), 1e-8)


def test_bounded_hazard_fine_if_weight_dies_too():
    weight = AgeProfile.from_steps([0.0, 5.0], [1.0, 0.0])
    dying = AgeProfile.from_steps([0.0, 5.0], [0.3, 0.0])
    got = survival_weighted_integral(weight, HazardAccumulator.of([dying]), 1e-10)
    assert got == pytest.approx((1 - math.exp(-1.5)) / 0.3, rel=1e-10)


def test_bad_rel_tol():
    acc = HazardAccumulator.of([AgeProfile.constant(1.0)])
    with pytest.raises(DomainError):
        survival_weighted_integral(AgeProfile.constant(1.0), acc, 0.0)
    with pytest.raises(DomainError):
        survival_weighted_integral(AgeProfile.constant(1.0), acc, -1e-3)


def test_negative_weight_rejected():
    acc = HazardAccumulator.of([AgeProfile.constant(1.0)])
    with pytest.raises(DomainError):
        survival_weighted_integral(AgeProfile.constant(-1.0), acc, 1e-8)


# -- misc profile algebra ---------------------------------------------------

def test_clipped_after():
    prof = AgeProfile.from_nodes([0, 10, 20], [1.0, 2.0, 3.0])
    clipped = prof.clipped_after(15.0)
    assert clipped(14.999) == pytest.approx(prof(14.999))
    assert clipped(15.0) == 0.0
    assert clipped(100.0) == 0.0


def test_axis_compression_preserves_values():
    k = default_k_profile()
    k_years = k.axis_compressed(DAYS_PER_YEAR)
    assert k_years(35.0) == k(35.0 * DAYS_PER_YEAR)
    assert k_years.breakpoints[1] == 30.0
