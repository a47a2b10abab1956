"""Exception hierarchy shared across the package."""


class MimsimError(Exception):
    """Base class for all package errors."""


class ParameterError(MimsimError, ValueError):
    """A physical parameter set is malformed (non-finite, negative rate...)."""


class InvalidTruncationError(MimsimError, ValueError):
    """The phonon ladder is too short to be meaningful."""


class AccuracyError(MimsimError):
    """Base for numerical-accuracy failures detected at runtime."""


class NormDriftError(AccuracyError):
    """Integrated state drifted from unit norm beyond the configured budget."""

    def __init__(self, t, drift, budget):
        self.t = t
        self.drift = drift
        self.budget = budget
        super().__init__(
            f"norm drift {drift:.3e} exceeds budget {budget:.1e} at t={t:.6g}; "
            "reduce dt"
        )


class TruncationError(AccuracyError):
    """Occupation of the highest retained phonon level is too large."""

    def __init__(self, t, tail, tolerance, n_max):
        self.t = t
        self.tail = tail
        self.tolerance = tolerance
        self.n_max = n_max
        super().__init__(
            f"top-level occupation {tail:.3e} exceeds {tolerance:.1e} at t={t:.6g} "
            f"with n_max={n_max}; increase n_max"
        )


class StepSizeError(MimsimError, ValueError):
    """Step size violates a stepper precondition."""


class ResonanceError(MimsimError, ValueError):
    """Quantity is undefined when omega_m == 2 * hop_j."""


class UndefinedEstimateError(MimsimError, ValueError):
    """Closed-form estimate has a vanishing denominator."""


class NoOutcomeError(MimsimError):
    """Projective measurement outcome has (numerically) zero probability."""


class FidelityConsistencyError(MimsimError):
    """Fidelity exceeded one by more than round-off; inputs are inconsistent."""


class ConfigError(MimsimError, ValueError):
    """Scenario configuration is invalid."""
