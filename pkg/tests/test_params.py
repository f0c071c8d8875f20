import math

import numpy as np
import pytest

from strata import (AgeProfile, CalibrationError, ConfigError, DomainError,
                    beta_from_contacts, calibrate_baseline, compute_R0,
                    gamma_from_period, k_from_chi, load_params)
from strata.params import (DAYS_PER_YEAR, default_chi_profile,
                           default_contact_curve, default_k_profile,
                           default_q_profile)


def test_gamma_from_period_values():
    assert gamma_from_period(14) == pytest.approx(1 / 14)
    assert gamma_from_period(8) == pytest.approx(1 / 8)
    assert gamma_from_period(1) == 1.0


def test_gamma_from_period_rejects_nonpositive():
    for bad in (0, -3):
        with pytest.raises(DomainError):
            gamma_from_period(bad)


def test_beta_from_contacts_arithmetic():
    c = AgeProfile.constant(10.0, "contacts/day")
    beta = beta_from_contacts(c, 1 / 8, 80e6)
    assert beta(0.0) == pytest.approx(10 * (1 / 8) / 80e6, rel=1e-14)


def test_beta_from_contacts_zero_cases():
    c = AgeProfile.constant(10.0)
    assert beta_from_contacts(c, 0.0, 80e6).max_value() == 0.0
    assert beta_from_contacts(AgeProfile.constant(0.0), 0.5, 80e6).max_value() == 0.0


def test_beta_from_contacts_rejects_bad_inputs():
    c = AgeProfile.constant(10.0)
    with pytest.raises(DomainError):
        beta_from_contacts(c, 0.5, 0.0)
    with pytest.raises(DomainError):
        beta_from_contacts(c, 1.5, 80e6)


def test_beta_from_contacts_linearity():
    rng = np.random.default_rng(5)
    curve = AgeProfile.from_nodes([0, 10 * 360, 80 * 360], rng.uniform(5, 20, 3))
    b1 = beta_from_contacts(curve, 0.2, 1e6)
    b2 = beta_from_contacts(curve.scaled(3.0), 0.2, 1e6)
    b3 = beta_from_contacts(curve, 0.4, 1e6)
    for age in (0.0, 1800.0, 40000.0):
        assert b2(age) == pytest.approx(3 * b1(age), rel=1e-12)
        assert b3(age) == pytest.approx(2 * b1(age), rel=1e-12)


def test_load_params_defaults():
    ps = load_params({})
    assert ps.n0 == 80e6
    assert ps.mu == pytest.approx(4.38356e-5)
    assert ps.p == pytest.approx(1e-3)
    assert ps.epsilon == 0.7
    assert ps.zeta == pytest.approx(1 / 14)
    assert ps.xi == 0.5
    assert ps.gamma_a == pytest.approx(1 / 8)
    assert ps.gamma_i(0.0) == pytest.approx(1 / 14)
    assert ps.k(0.0) == pytest.approx(1 / 4)
    assert ps.chi(65 * 360) == pytest.approx(1 / 4.1)
    # transmission profiles derived from the bundled contact curve
    c0 = default_contact_curve().profile(0.0)
    assert ps.beta_a(0.0) == pytest.approx(c0 * (1 / 8) / 80e6, rel=1e-12)
    assert ps.beta_i(0.0) == pytest.approx(c0 * (1 / 3) / 80e6, rel=1e-12)


def test_load_params_single_override():
    ps = load_params({"xi": 0.0})
    assert ps.xi == 0.0
    defaults = load_params({})
    assert ps.k == defaults.k
    assert ps.n0 == defaults.n0


def test_load_params_epsilon_out_of_range():
    with pytest.raises(ConfigError) as err:
        load_params({"epsilon": 1.5})
    assert "epsilon" in str(err.value)


def test_load_params_unknown_field():
    with pytest.raises(ConfigError):
        load_params({"nonsense": 1})


def test_load_params_bad_profile_named():
    with pytest.raises(ConfigError) as err:
        load_params({"q": {"breakpoints_days": [0], "kind": "nope", "values": [1]}})
    assert "q" in str(err.value)


def test_round_trip_serialization():
    ps = load_params({"xi": 0.25, "N0": 5e6})
    again = load_params(ps.to_json())
    assert again == ps


def test_common_zero_rejected():
    with pytest.raises(ConfigError) as err:
        load_params({"beta_A": 0.0, "beta_I": 0.0, "gamma_I": 0.0})
    assert "gamma_I" in str(err.value)


def test_k_from_chi_point_values():
    assert k_from_chi(AgeProfile.constant(1 / 5))(0.0) == pytest.approx(1 / 4, rel=1e-12)
    assert k_from_chi(AgeProfile.constant(1 / 2))(0.0) == pytest.approx(1.0, rel=1e-12)


def test_k_from_chi_reproduces_default_table():
    derived = k_from_chi(default_chi_profile())
    table = default_k_profile()
    for age_years in (0, 35, 45, 55, 65, 75, 95):
        assert derived(age_years * DAYS_PER_YEAR) == pytest.approx(
            table(age_years * DAYS_PER_YEAR), rel=1e-12)


def test_k_from_chi_rejects_out_of_range():
    with pytest.raises(DomainError):
        k_from_chi(AgeProfile.constant(1.0))
    with pytest.raises(DomainError):
        k_from_chi(AgeProfile.constant(0.0))


def test_calibrate_fixed_point():
    ps = load_params({})
    r0 = compute_R0(ps).r0
    same = calibrate_baseline(ps, r0)
    assert compute_R0(same).r0 == pytest.approx(r0, rel=1e-12)
    for age in (0.0, 9000.0):
        assert same.beta_a(age) == pytest.approx(ps.beta_a(age), rel=1e-12)


def test_calibrate_to_anchor():
    ps = calibrate_baseline(load_params({}), 2.854)
    bk = compute_R0(ps)
    assert bk.r0 == pytest.approx(2.854, rel=1e-9)
    assert bk.r_a > 0 and bk.r_i > 0


def test_calibrate_doubling_scales_betas():
    ps = load_params({})
    r0 = compute_R0(ps).r0
    doubled = calibrate_baseline(ps, 2 * r0)
    assert compute_R0(doubled).r0 == pytest.approx(2 * r0, rel=1e-9)
    for age in (0.0, 20 * 360.0):
        assert doubled.beta_a(age) == pytest.approx(2 * ps.beta_a(age), rel=1e-9)
        assert doubled.beta_i(age) == pytest.approx(2 * ps.beta_i(age), rel=1e-9)


def test_calibrate_idempotent():
    ps = calibrate_baseline(load_params({}), 2.854)
    twice = calibrate_baseline(ps, 2.854)
    for age in (0.0, 10000.0, 40000.0):
        assert twice.beta_a(age) == pytest.approx(ps.beta_a(age), rel=1e-12)


def test_calibrate_zero_baseline_fails():
    ps = load_params({"beta_A": 0.0, "beta_I": 0.0})
    with pytest.raises(CalibrationError):
        calibrate_baseline(ps, 2.854)


def test_default_q_curve_shape():
    q = default_q_profile()
    assert q(0.0) == pytest.approx(0.46)
    assert q(70 * DAYS_PER_YEAR) == pytest.approx(0.20)
    assert q.min_value() >= 0.0 and q.max_value() <= 1.0
