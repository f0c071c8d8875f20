"""Basic reproductive number of the age-structured model.

The value splits into a scalar prefactor and two survival-weighted pieces:

* the asymptomatic piece is the product of the latency factor
  ``int k q exp(-int (k + mu))`` and the asymptomatic transmission factor
  ``int beta_A exp(-int (gamma_A xi + chi (1 - xi) + mu))``;
* the symptomatic piece multiplies the symptomatic transmission factor
  ``int beta_I exp(-int (gamma_I + mu))`` by the sum of the direct-latency
  factor ``int k (1 - q) exp(-int (k + mu))`` and the
  latency-then-symptom-onset path (latency factor times
  ``int chi (1 - xi) exp(-int (gamma_A xi + chi (1 - xi) + mu))``).

Axis convention: the age-dependent rate tables carry per-day values while
their source states the age variable in years, and the published numbers are
only reproduced when the survival exponents accumulate those per-day values
over year-denominated age.  The engine therefore compresses the day-based
profiles by the 360-day year before integrating.  This also keeps every age
cohort numerically visible; on a literal day axis the survival factors would
vanish within the first cohort.

All functions are pure and reentrant; grid sweeps may call them from many
threads concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .params import DAYS_PER_YEAR, ParamSet
from .profiles import (AgeProfile, HazardAccumulator, profile_product,
                       survival_weighted_integral)

DEFAULT_REL_TOL = 1e-8


@dataclass(frozen=True)
class R0Breakdown:
    """Reproduction number with its asymptomatic/symptomatic split."""

    r_a: float
    r_i: float
    prefactor: float
    r0: float

    def to_json(self, ndigits=None):
        vals = {"r_a": self.r_a, "r_i": self.r_i,
                "prefactor": self.prefactor, "r0": self.r0}
        if ndigits is not None:
            vals = {k: round(v, ndigits) for k, v in vals.items()}
        return vals


def _year_axis(profile: AgeProfile) -> AgeProfile:
    return profile.axis_compressed(DAYS_PER_YEAR)


def _latency_hazard(params: ParamSet) -> HazardAccumulator:
    return HazardAccumulator.of([_year_axis(params.k),
                                 AgeProfile.constant(params.mu, "1/day")])


def _asymptomatic_hazard(params: ParamSet) -> HazardAccumulator:
    chi_part = _year_axis(params.chi).scaled(1.0 - params.xi)
    const = AgeProfile.constant(params.gamma_a * params.xi + params.mu, "1/day")
    return HazardAccumulator.of([chi_part, const])


def _symptomatic_hazard(params: ParamSet) -> HazardAccumulator:
    return HazardAccumulator.of([_year_axis(params.gamma_i),
                                 AgeProfile.constant(params.mu, "1/day")])


@lru_cache(maxsize=256)
def _background_factors(k, q, chi, xi, gamma_a, mu, rel_tol):
    """(latency, direct-symptomatic, symptom-onset) factors.

    These depend only on the background parameters, which intervention
    scales never touch, so they are memoized across grid sweeps.
    """
    k_y, q_y, chi_y = _year_axis(k), _year_axis(q), _year_axis(chi)
    latency_acc = HazardAccumulator.of([k_y, AgeProfile.constant(mu, "1/day")])
    asymp_acc = HazardAccumulator.of([chi_y.scaled(1.0 - xi),
                                      AgeProfile.constant(gamma_a * xi + mu, "1/day")])
    latency = survival_weighted_integral(profile_product(k_y, q_y), latency_acc, rel_tol)
    direct = survival_weighted_integral(profile_product(k_y, q_y.one_minus()),
                                        latency_acc, rel_tol)
    onset = survival_weighted_integral(chi_y.scaled(1.0 - xi), asymp_acc, rel_tol)
    return latency, direct, onset


def _factors(params: ParamSet, rel_tol):
    return _background_factors(params.k, params.q, params.chi, params.xi,
                               params.gamma_a, params.mu, rel_tol)


def latency_factor(params: ParamSet, rel_tol=DEFAULT_REL_TOL) -> float:
    """``int k q exp(-int (k + mu))`` - probability-weighted flow into the asymptomatic branch."""
    return _factors(params, rel_tol)[0]


def direct_symptomatic_factor(params: ParamSet, rel_tol=DEFAULT_REL_TOL) -> float:
    """``int k (1 - q) exp(-int (k + mu))`` - flow straight into the symptomatic branch."""
    return _factors(params, rel_tol)[1]


def symptom_onset_factor(params: ParamSet, rel_tol=DEFAULT_REL_TOL) -> float:
    """``int chi (1 - xi) exp(-int (gamma_A xi + chi (1 - xi) + mu))``."""
    return _factors(params, rel_tol)[2]


def compute_RA(params: ParamSet, rel_tol=DEFAULT_REL_TOL) -> float:
    """Asymptomatic piece of the reproduction number (before the prefactor)."""
    beta_factor = survival_weighted_integral(_year_axis(params.beta_a),
                                             _asymptomatic_hazard(params), rel_tol)
    return latency_factor(params, rel_tol) * beta_factor


def compute_RI(params: ParamSet, rel_tol=DEFAULT_REL_TOL) -> float:
    """Symptomatic piece of the reproduction number (before the prefactor)."""
    beta_factor = survival_weighted_integral(_year_axis(params.beta_i),
                                             _symptomatic_hazard(params), rel_tol)
    bracket = (direct_symptomatic_factor(params, rel_tol)
               + latency_factor(params, rel_tol) * symptom_onset_factor(params, rel_tol))
    return bracket * beta_factor


def prefactor(params: ParamSet) -> float:
    """``mu N0 / (p + mu) * (1 + p (1 - epsilon) / (zeta epsilon + mu))``."""
    return (params.mu * params.n0 / (params.p + params.mu)
            * (1.0 + params.p * (1.0 - params.epsilon)
               / (params.zeta * params.epsilon + params.mu)))


def compute_R0(params: ParamSet, rel_tol=DEFAULT_REL_TOL) -> R0Breakdown:
    """Full reproduction number, deterministic for fixed inputs and tolerance."""
    r_a = compute_RA(params, rel_tol)
    r_i = compute_RI(params, rel_tol)
    pref = prefactor(params)
    return R0Breakdown(r_a=r_a, r_i=r_i, prefactor=pref, r0=pref * (r_a + r_i))
