"""Cohort-targeted rescaling of the intervention-sensitive parameters.

An intervention configuration is described by a pair of cohort subsets and
two intensities: contact reduction multiplies both transmission-rate profiles
by ``a`` on the targeted cohorts, and testing multiplies the symptomatic
removal rate by ``1/b`` there (detection after ``b`` times the baseline
infectious period).  Applying such a scale to a baseline parameter set is a
pointwise (Hadamard) product; as long as the baseline's intervention triple
is nowhere simultaneously zero, the scale can be recovered uniquely from the
scaled parameter set.

A scale is *horizontal* when it does not distinguish cohorts (each subset is
empty or the full partition), and *age-targeted* otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources

import numpy as np

from .errors import DomainError, NotInStrategyError
from .params import DAYS_PER_YEAR, ParamSet
from .profiles import AgeProfile, profile_product

DEFAULT_COHORT_BOUNDARIES = (0.0, 6.0, 18.0, 24.0, 65.0, 90.0)
DEFAULT_COHORT_LABELS = ("toddlers and preschoolers", "school students",
                         "university students", "working class", "pensioners")


@dataclass(frozen=True)
class CohortPartition:
    """Ascending age boundaries (years) splitting the lifespan into cohorts.

    Cohort ``j`` (1-based) spans ``[boundaries[j-1], boundaries[j])``; ages at
    or beyond the last boundary are attributed to the last cohort, mirroring
    the constant extension of age profiles.
    """

    boundaries: tuple = DEFAULT_COHORT_BOUNDARIES
    labels: tuple = DEFAULT_COHORT_LABELS

    def __post_init__(self):
        bounds = np.asarray(self.boundaries, dtype=float)
        if bounds.size < 2 or bounds[0] != 0.0 or not np.all(np.diff(bounds) > 0):
            raise DomainError("boundaries must be ascending and start at 0")
        if self.labels and len(self.labels) != bounds.size - 1:
            raise DomainError("need one label per cohort")

    @property
    def n(self):
        return len(self.boundaries) - 1

    @property
    def all_cohorts(self):
        return frozenset(range(1, self.n + 1))

    def cohort_of(self, age_years, extend=False):
        """1-based cohort index containing ``age_years``."""
        age = float(age_years)
        if age < 0:
            raise DomainError("age must be nonnegative")
        if age >= self.boundaries[-1]:
            if extend:
                return self.n
            raise DomainError(f"age {age:g} lies beyond the last cohort boundary")
        return int(np.searchsorted(self.boundaries, age, side="right"))

    def check_subset(self, w):
        w = frozenset(int(j) for j in w)
        if not w <= self.all_cohorts:
            raise DomainError(f"cohort subset {sorted(w)} not within 1..{self.n}")
        return w

    def boundaries_days(self):
        return tuple(b * DAYS_PER_YEAR for b in self.boundaries)


def rho(w, a, age_years, partition: CohortPartition = CohortPartition()) -> float:
    """Contact-reduction multiplier: ``a`` on targeted cohorts, 1 elsewhere."""
    if not 0.0 <= a <= 1.0:
        raise DomainError("a must lie in [0, 1]")
    w = partition.check_subset(w)
    return a if partition.cohort_of(age_years) in w else 1.0


def g(w, b, age_years, partition: CohortPartition = CohortPartition()) -> float:
    """Testing multiplier on the symptomatic removal rate: ``1/b`` on targeted cohorts."""
    if not 0.0 < b <= 1.0:
        raise DomainError("b must lie in (0, 1]; b = 0 (instant detection) "
                          "is only meaningful as a limit")
    w = partition.check_subset(w)
    return 1.0 / b if partition.cohort_of(age_years) in w else 1.0


def cohort_step_profile(w, inside, outside, partition: CohortPartition) -> AgeProfile:
    """Step profile equal to ``inside`` on the targeted cohorts, ``outside`` elsewhere.

    The last cohort's membership extends constantly beyond the final boundary,
    matching profile semantics.
    """
    w = partition.check_subset(w)
    bps = partition.boundaries_days()
    values = [inside if (j + 1) in w else outside for j in range(partition.n)]
    return AgeProfile.from_steps(bps[:-1], values, "dimensionless")


@dataclass(frozen=True)
class StrategicScale:
    """The multiplier tuple (rho, rho, g) acting on (beta_A, beta_I, gamma_I)."""

    w_beta: frozenset
    w_gamma: frozenset
    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "w_beta", frozenset(int(j) for j in self.w_beta))
        object.__setattr__(self, "w_gamma", frozenset(int(j) for j in self.w_gamma))
        if not 0.0 <= self.a <= 1.0:
            raise DomainError("a must lie in [0, 1]")
        if not 0.0 < self.b <= 1.0:
            raise DomainError("b must lie in (0, 1]")

    def canonical(self):
        """Identity-normalize: drop targeted sets whose intensity is neutral."""
        w_beta = frozenset() if self.a == 1.0 else self.w_beta
        w_gamma = frozenset() if self.b == 1.0 else self.w_gamma
        a = self.a if w_beta else 1.0
        b = self.b if w_gamma else 1.0
        return StrategicScale(w_beta, w_gamma, a, b)


def is_horizontal(scale: StrategicScale,
                  partition: CohortPartition = CohortPartition()) -> bool:
    """True iff the scale does not distinguish cohorts."""
    full = partition.all_cohorts
    return (scale.w_beta in (frozenset(), full)
            and scale.w_gamma in (frozenset(), full))


def is_age_based(scale: StrategicScale,
                 partition: CohortPartition = CohortPartition()) -> bool:
    return not is_horizontal(scale, partition)


@dataclass(frozen=True)
class StrategyElement:
    """A strategic scale together with the parameter set it produces."""

    scale: StrategicScale
    applied: ParamSet


def apply_scale(scale: StrategicScale, baseline: ParamSet,
                partition: CohortPartition = CohortPartition()) -> StrategyElement:
    """Hadamard-multiply the baseline's intervention triple by the scale.

    The transmission profiles pick up the cohort boundaries as extra
    breakpoints; the background parameters are untouched.
    """
    rho_step = cohort_step_profile(scale.w_beta, scale.a, 1.0, partition)
    g_step = cohort_step_profile(scale.w_gamma, 1.0 / scale.b, 1.0, partition)
    applied = replace(
        baseline,
        beta_a=profile_product(baseline.beta_a, rho_step),
        beta_i=profile_product(baseline.beta_i, rho_step),
        gamma_i=profile_product(baseline.gamma_i, g_step),
    )
    return StrategyElement(scale=scale, applied=applied)


def _cohort_ratio(applied: AgeProfile, base: AgeProfile, lo_days, hi_days, tol):
    """Common ratio applied/base over [lo, hi) where base is nonzero; None if
    base vanishes identically there; raises if the ratio is not constant."""
    mesh = np.union1d(np.asarray(applied.breakpoints), np.asarray(base.breakpoints))
    mesh = mesh[(mesh >= lo_days) & (mesh < hi_days)]
    probes = np.unique(np.concatenate([[lo_days], mesh,
                                       0.5 * (np.r_[lo_days, mesh] + np.r_[mesh, hi_days]),
                                       [np.nextafter(hi_days, lo_days)]]))
    probes = probes[(probes >= lo_days) & (probes < hi_days)]
    ratio = None
    for x in probes:
        b = float(base(x))
        if b == 0.0:
            if float(applied(x)) != 0.0:
                raise NotInStrategyError(
                    f"value appears at age {x:g} days where the baseline vanishes")
            continue
        r = float(applied(x)) / b
        if ratio is None:
            ratio = r
        elif abs(r - ratio) > tol * max(1.0, abs(ratio)):
            raise NotInStrategyError(
                f"ratio is not cohort-constant near age {x:g} days")
    return ratio


def recover_scale(element: StrategyElement, baseline: ParamSet,
                  partition: CohortPartition = CohortPartition(),
                  tol: float = 1e-9) -> StrategicScale:
    """Unique scale turning ``baseline`` into ``element.applied`` (inverse of
    :func:`apply_scale`); requires a baseline triple with no common zero."""
    applied = element.applied
    bounds = partition.boundaries_days()
    beta_ratios, gamma_ratios = [], []
    for j in range(partition.n):
        lo = bounds[j]
        hi = bounds[j + 1] if j + 1 < partition.n else np.inf
        r_a = _cohort_ratio(applied.beta_a, baseline.beta_a, lo, min(hi, bounds[-1]), tol)
        r_i = _cohort_ratio(applied.beta_i, baseline.beta_i, lo, min(hi, bounds[-1]), tol)
        if r_a is not None and r_i is not None and abs(r_a - r_i) > tol * max(1.0, abs(r_a)):
            raise NotInStrategyError(
                f"transmission profiles scaled inconsistently on cohort {j + 1}")
        beta_ratios.append(r_a if r_a is not None else r_i)
        gamma_ratios.append(_cohort_ratio(applied.gamma_i, baseline.gamma_i,
                                          lo, min(hi, bounds[-1]), tol))

    def assemble(ratios, invert):
        w, intensity = set(), None
        for j, r in enumerate(ratios, start=1):
            if r is None or abs(r - 1.0) <= tol:
                continue
            value = 1.0 / r if invert else r
            if intensity is None:
                intensity = value
            elif abs(value - intensity) > tol * max(1.0, abs(intensity)):
                raise NotInStrategyError("targeted cohorts carry different intensities")
            w.add(j)
        return frozenset(w), intensity

    w_beta, a = assemble(beta_ratios, invert=False)
    w_gamma, b = assemble(gamma_ratios, invert=True)
    if a is not None and not 0.0 <= a <= 1.0:
        raise NotInStrategyError(f"recovered contact multiplier {a!r} outside [0, 1]")
    if b is not None and not 0.0 < b <= 1.0:
        raise NotInStrategyError(f"recovered testing multiplier {b!r} outside (0, 1]")
    return StrategicScale(w_beta, w_gamma, a if a is not None else 1.0,
                          b if b is not None else 1.0)


@dataclass(frozen=True)
class Rectangle:
    """Closure of the admissible (a, b) rectangle of a substrategy.

    ``b_min = 0`` stands for the instant-detection limit, which is attainable
    only as a limit of the open interval (0, 1].
    """

    a_min: float = 0.0
    a_max: float = 1.0
    b_min: float = 0.0
    b_max: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.a_min <= self.a_max <= 1.0):
            raise DomainError("a-interval must satisfy 0 <= a_min <= a_max <= 1")
        if not (0.0 <= self.b_min <= self.b_max <= 1.0):
            raise DomainError("b-interval must satisfy 0 <= b_min <= b_max <= 1")


@dataclass(frozen=True)
class Substrategy:
    """A named family of scales with fixed cohort subsets and an (a, b) rectangle."""

    w_beta: frozenset
    w_gamma: frozenset
    name: str = ""
    index: int = 0
    domain: Rectangle = field(default_factory=Rectangle)

    def __post_init__(self):
        object.__setattr__(self, "w_beta", frozenset(int(j) for j in self.w_beta))
        object.__setattr__(self, "w_gamma", frozenset(int(j) for j in self.w_gamma))

    def scale_at(self, a, b) -> StrategicScale:
        return StrategicScale(self.w_beta, self.w_gamma, a, b)


def horizontal_lockdown_substrategy(partition: CohortPartition = CohortPartition()) -> Substrategy:
    """Uniform contact reduction on every cohort, no testing."""
    return Substrategy(w_beta=partition.all_cohorts, w_gamma=frozenset(),
                       name="horizontal lockdown", index=0)


def load_catalog(path=None) -> list:
    """The bundled sixteen age-targeted substrategies (or a user catalog)."""
    if path is None:
        with resources.files("strata.data").joinpath("substrategies.json").open() as fh:
            doc = json.load(fh)
    else:
        with open(path) as fh:
            doc = json.load(fh)
    entries = doc["substrategies"] if isinstance(doc, dict) else doc
    out = []
    for entry in entries:
        out.append(Substrategy(w_beta=frozenset(entry["w_beta"]),
                               w_gamma=frozenset(entry["w_gamma"]),
                               name=entry.get("label", ""),
                               index=int(entry.get("index", len(out) + 1))))
    return out
