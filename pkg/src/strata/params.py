"""Model parameterization: defaults, config loading, derived rates, calibration.

The full parameter set consists of the intervention-sensitive triple
(beta_A, beta_I, gamma_I) plus the background vector
(mu, p, epsilon, zeta, k, q, xi, chi, gamma_A) and the population size N0.
Transmission-rate profiles are derived from a bundled contact curve and then
pinned to an anchor reproduction number by :func:`calibrate_baseline`; the
digitized curves themselves are replaceable data files.

Ages in year-denominated inputs are converted to days at ingestion using the
360-day year that the age-dependent rate tables are written in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources

import jsonschema
import numpy as np

from .errors import CalibrationError, ConfigError, DomainError
from .profiles import AgeProfile

DAYS_PER_YEAR = 360.0

# background defaults (per day where dimensional)
DEFAULT_N0 = 80e6
DEFAULT_MU = 4.38356e-5
DEFAULT_P = 1e-3
DEFAULT_EPSILON = 0.7
DEFAULT_ZETA = 1.0 / 14.0
DEFAULT_XI = 0.5
DEFAULT_GAMMA_A = 1.0 / 8.0
DEFAULT_GAMMA_I = 1.0 / 14.0
DEFAULT_VARPI_E_TO_A = 1.0 / 8.0
DEFAULT_VARPI_E_TO_I = 1.0 / 3.0

# age-dependent latent and incubation rates: six constant steps with
# decade boundaries from 30 to 70 years of age
_RATE_STEP_AGES_YEARS = (0.0, 30.0, 40.0, 50.0, 60.0, 70.0)
_K_VALUES = (1 / 4, 1 / 4.8, 1 / 4.8, 1 / 5.5, 1 / 3.1, 1 / 6)
_CHI_VALUES = (1 / 5, 1 / 5.8, 1 / 5.8, 1 / 6.5, 1 / 4.1, 1 / 7)


def default_k_profile() -> AgeProfile:
    bps = [a * DAYS_PER_YEAR for a in _RATE_STEP_AGES_YEARS]
    return AgeProfile.from_steps(bps, _K_VALUES, "1/day")


def default_chi_profile() -> AgeProfile:
    bps = [a * DAYS_PER_YEAR for a in _RATE_STEP_AGES_YEARS]
    return AgeProfile.from_steps(bps, _CHI_VALUES, "1/day")


def _load_data_json(name):
    with resources.files("strata.data").joinpath(name).open() as fh:
        return json.load(fh)


def default_contact_curve() -> "ContactCurve":
    doc = _load_data_json("contacts_default.json")
    return ContactCurve(AgeProfile.from_json(doc["profile"]), doc.get("provenance", ""))


def default_q_profile() -> AgeProfile:
    doc = _load_data_json("asymptomatic_q_default.json")
    return AgeProfile.from_json(doc["profile"])


@dataclass(frozen=True)
class ContactCurve:
    """Average daily close contacts by chronological age."""

    profile: AgeProfile
    provenance: str = ""

    def __post_init__(self):
        if not self.profile.is_nonnegative():
            raise DomainError("contact curve must be nonnegative")


@dataclass(frozen=True)
class ParamSet:
    """Immutable full model parameterization.

    The triple ``(beta_a, beta_i, gamma_i)`` is what intervention strategies
    rescale; everything else is fixed background.
    """

    n0: float
    mu: float
    p: float
    epsilon: float
    zeta: float
    xi: float
    gamma_a: float
    k: AgeProfile
    q: AgeProfile
    chi: AgeProfile
    beta_a: AgeProfile
    beta_i: AgeProfile
    gamma_i: AgeProfile

    def __post_init__(self):
        self.validate()

    def validate(self):
        scalars = {"n0": self.n0, "mu": self.mu, "p": self.p, "zeta": self.zeta,
                   "gamma_a": self.gamma_a}
        if self.n0 <= 0:
            raise ConfigError("N0", "population size must be positive")
        for name, v in scalars.items():
            if not np.isfinite(v) or v < 0:
                raise ConfigError(name, "must be a finite nonnegative number")
        for name, v in (("epsilon", self.epsilon), ("xi", self.xi)):
            if not 0.0 <= v <= 1.0:
                raise ConfigError(name, "must lie in [0, 1]")
        for name, prof in (("k", self.k), ("chi", self.chi), ("beta_A", self.beta_a),
                           ("beta_I", self.beta_i), ("gamma_I", self.gamma_i)):
            if not prof.is_nonnegative():
                raise ConfigError(name, "profile values must be nonnegative")
        if self.q.min_value() < 0.0 or self.q.max_value() > 1.0:
            raise ConfigError("q", "proportion profile must stay in [0, 1]")
        self._check_common_zero()

    def _check_common_zero(self):
        """Reject a common zero of (beta_A, beta_I, gamma_I).

        A nowhere-all-zero reference is what makes strategic scales unique;
        checked pointwise at breakpoints and segment midpoints.
        """
        mesh = np.union1d(np.union1d(self.beta_a.breakpoints, self.beta_i.breakpoints),
                          self.gamma_i.breakpoints)
        probes = np.concatenate([mesh, 0.5 * (mesh[:-1] + mesh[1:]), [mesh[-1] + 1.0]])
        for x in probes:
            if self.beta_a(x) == 0.0 and self.beta_i(x) == 0.0 and self.gamma_i(x) == 0.0:
                raise ConfigError(
                    "beta_A/beta_I/gamma_I",
                    f"simultaneously zero at age {x:g} days; strategic scales would not be unique")

    @property
    def intervention_triple(self):
        """(beta_A, beta_I, gamma_I) - the profiles strategies act on."""
        return self.beta_a, self.beta_i, self.gamma_i

    def with_scaled_betas(self, factor):
        return replace(self, beta_a=self.beta_a.scaled(factor),
                       beta_i=self.beta_i.scaled(factor))

    def to_json(self):
        return {
            "schema_version": 1,
            "N0": self.n0, "mu": self.mu, "p": self.p, "epsilon": self.epsilon,
            "zeta": self.zeta, "xi": self.xi, "gamma_A": self.gamma_a,
            "gamma_I": self.gamma_i.to_json(), "k": self.k.to_json(),
            "q": self.q.to_json(), "chi": self.chi.to_json(),
            "beta_A": self.beta_a.to_json(), "beta_I": self.beta_i.to_json(),
        }

    def fingerprint(self):
        import hashlib
        doc = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(doc).hexdigest()[:16]


def gamma_from_period(period_days) -> float:
    """Removal rate 1/P for an average compartment-residence period P."""
    p = float(period_days)
    if p <= 0:
        raise DomainError("period must be positive")
    return 1.0 / p


def beta_from_contacts(contacts, varpi, n0) -> AgeProfile:
    """Transmission-rate profile ``c(age) * varpi / N0``, breakpoints preserved."""
    if not 0.0 <= varpi <= 1.0:
        raise DomainError("varpi must lie in [0, 1]")
    if n0 <= 0:
        raise DomainError("N0 must be positive")
    profile = contacts.profile if isinstance(contacts, ContactCurve) else contacts
    out = profile.scaled(varpi / n0)
    return replace(out, value_units="1/(individual*day)")


def k_from_chi(chi: AgeProfile) -> AgeProfile:
    """Latent-rate profile ``chi / (1 - chi)``, applied value-wise per segment.

    Mirrors how the default latent-rate table is obtained from the incubation
    rates; values must lie in (0, 1) numerically.  The transformation is
    applied at segment endpoints, so it is exact for step profiles.
    """
    vals = np.concatenate([chi.seg_lo, chi.seg_hi, [chi.tail]])
    if np.any(vals <= 0.0) or np.any(vals >= 1.0):
        raise DomainError("chi values must lie strictly inside (0, 1)")
    f = lambda v: v / (1.0 - v)
    return AgeProfile(chi.breakpoints,
                      tuple(f(v) for v in chi.seg_lo),
                      tuple(f(v) for v in chi.seg_hi),
                      f(chi.tail), "1/day")


_SCHEMA = None
_VALIDATOR = None


def params_schema():
    global _SCHEMA
    if _SCHEMA is None:
        _SCHEMA = _load_data_json("params.schema.json")
    return _SCHEMA


def _validator():
    global _VALIDATOR
    if _VALIDATOR is None:
        _VALIDATOR = jsonschema.Draft202012Validator(params_schema())
    return _VALIDATOR


def _coerce_profile(value, field, units=""):
    if isinstance(value, (int, float)):
        return AgeProfile.constant(float(value), units)
    try:
        return AgeProfile.from_json(value)
    except (KeyError, DomainError) as exc:
        raise ConfigError(field, f"invalid profile: {exc}") from exc


def load_params(document=None) -> ParamSet:
    """Build a validated :class:`ParamSet` from a config document.

    ``document`` may be a dict, a JSON file path, or None for the bundled
    defaults.  Omitted fields take the documented default values; validation
    failures name the offending field.
    """
    if document is None:
        document = {}
    if not isinstance(document, dict):
        raise ConfigError("document", "configuration must be a JSON object "
                                      "(use load_params_file for file paths)")
    error = jsonschema.exceptions.best_match(_validator().iter_errors(document))
    if error is not None:
        field = ".".join(str(p) for p in error.absolute_path) or "document"
        raise ConfigError(field, error.message) from error

    n0 = float(document.get("N0", DEFAULT_N0))
    varpi_a = float(document.get("varpi_E_to_A", DEFAULT_VARPI_E_TO_A))
    varpi_i = float(document.get("varpi_E_to_I", DEFAULT_VARPI_E_TO_I))
    contacts = (_coerce_profile(document["contacts"], "contacts", "contacts/day")
                if "contacts" in document else default_contact_curve().profile)

    if "beta_A" in document:
        beta_a = _coerce_profile(document["beta_A"], "beta_A", "1/(individual*day)")
    else:
        beta_a = beta_from_contacts(contacts, varpi_a, n0)
    if "beta_I" in document:
        beta_i = _coerce_profile(document["beta_I"], "beta_I", "1/(individual*day)")
    else:
        beta_i = beta_from_contacts(contacts, varpi_i, n0)

    return ParamSet(
        n0=n0,
        mu=float(document.get("mu", DEFAULT_MU)),
        p=float(document.get("p", DEFAULT_P)),
        epsilon=float(document.get("epsilon", DEFAULT_EPSILON)),
        zeta=float(document.get("zeta", DEFAULT_ZETA)),
        xi=float(document.get("xi", DEFAULT_XI)),
        gamma_a=float(document.get("gamma_A", DEFAULT_GAMMA_A)),
        k=(_coerce_profile(document["k"], "k", "1/day")
           if "k" in document else default_k_profile()),
        q=(_coerce_profile(document["q"], "q", "dimensionless")
           if "q" in document else default_q_profile()),
        chi=(_coerce_profile(document["chi"], "chi", "1/day")
             if "chi" in document else default_chi_profile()),
        beta_a=beta_a,
        beta_i=beta_i,
        gamma_i=_coerce_profile(document.get("gamma_I", DEFAULT_GAMMA_I), "gamma_I", "1/day"),
    )


def load_params_file(path) -> ParamSet:
    try:
        with open(path) as fh:
            document = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError("document", f"not valid JSON: {exc}") from exc
    return load_params(document)


def calibrate_baseline(params: ParamSet, target_r0: float, rel_tol: float = 1e-8) -> ParamSet:
    """Rescale both transmission profiles so the reproduction number hits ``target_r0``.

    The reproduction number is linear in (beta_A, beta_I), so a single common
    factor suffices; the result is verified to 1e-9 relative.
    """
    from .r0 import compute_R0

    if target_r0 <= 0:
        raise DomainError("target reproduction number must be positive")
    current = compute_R0(params, rel_tol).r0
    if current == 0.0:
        raise CalibrationError("baseline reproduction number is zero; cannot rescale")
    factor = target_r0 / current
    calibrated = params.with_scaled_betas(factor)
    achieved = compute_R0(calibrated, rel_tol).r0
    if abs(achieved - target_r0) > 1e-9 * target_r0:
        raise CalibrationError(
            f"calibration missed the target: {achieved!r} vs {target_r0!r}")
    return calibrated
