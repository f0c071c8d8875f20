"""Toolkit for grading and comparing epidemic intervention strategies.

Builds the age-structured basic reproductive number from piecewise parameter
profiles, rescales the intervention-sensitive parameters over age cohorts,
and compares age-targeted restrictions against graded horizontal lockdowns
through coverage tables, grid sweeps and equal-R0 loci.
"""

from .errors import (CalibrationError, ConfigError, ConvergenceError,
                     DomainError, GradabilityError, NoLocusError,
                     NotInStrategyError)
from .profiles import (AgeProfile, HazardAccumulator, cumulative_hazard,
                       eval_profile, survival_weighted_integral)
from .params import (ContactCurve, ParamSet, beta_from_contacts,
                     calibrate_baseline, gamma_from_period, k_from_chi,
                     load_params, load_params_file)
from .r0 import R0Breakdown, compute_R0, compute_RA, compute_RI
from .strategies import (CohortPartition, Rectangle, StrategicScale,
                         StrategyElement, Substrategy, apply_scale, g,
                         horizontal_lockdown_substrategy, is_age_based,
                         is_horizontal, load_catalog, recover_scale, rho)
from .comparison import (ComparisonTable, Grade, SweepGrid, build_comparison_table,
                         build_gradation, covers, extract_locus, min_r0,
                         scaled_params, sweep_grid)

__version__ = "0.1.0"

__all__ = [
    "AgeProfile", "HazardAccumulator", "cumulative_hazard", "eval_profile",
    "survival_weighted_integral", "ContactCurve", "ParamSet",
    "beta_from_contacts", "calibrate_baseline", "gamma_from_period",
    "k_from_chi", "load_params", "load_params_file", "R0Breakdown",
    "compute_R0", "compute_RA", "compute_RI", "CohortPartition", "Rectangle",
    "StrategicScale", "StrategyElement", "Substrategy", "apply_scale", "g",
    "horizontal_lockdown_substrategy", "is_age_based", "is_horizontal",
    "load_catalog", "recover_scale", "rho", "ComparisonTable", "Grade",
    "SweepGrid", "build_comparison_table", "build_gradation", "covers",
    "extract_locus", "min_r0", "scaled_params", "sweep_grid",
    "CalibrationError", "ConfigError", "ConvergenceError", "DomainError",
    "GradabilityError", "NoLocusError", "NotInStrategyError",
]
