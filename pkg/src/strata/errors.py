"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(ValueError):
    """A configuration document violates the schema or a parameter invariant.

    The message names the offending field.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ConvergenceError(RuntimeError):
    """A quadrature did not converge (e.g. the hazard stays bounded)."""


class CalibrationError(RuntimeError):
    """The baseline cannot be rescaled to the requested reproduction number."""


class NotInStrategyError(ValueError):
    """A parameter set is not a cohort-constant rescaling of the baseline."""


class GradabilityError(ValueError):
    """A requested gradation is not injective (duplicate intensities)."""


class NoLocusError(ValueError):
    """No equal-R0 locus exists for the requested substrategy/grade pair."""
