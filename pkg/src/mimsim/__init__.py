"""Single-photon dynamics in a frequency-modulated membrane-in-the-middle cavity."""

__version__ = "0.1.0"

from .params import (  # noqa: E402
    ConditionReport,
    ConditionThresholds,
    ModelParams,
    check_conditions,
    derived_quantities,
    experiment_params,
    fig2_params,
    modulated_frequencies,
)
from .analytic import (  # noqa: E402
    AnalyticState,
    analytic_state,
    approx_amplitudes,
    approx_superposition,
    beta_of_t,
    coherent_coefficients,
    theta_of_t,
)
from .fock import (  # noqa: E402
    IntegrationConfig,
    PhotonFockState,
    Trajectory,
    expm_oracle_step,
    initial_photon_superposition,
    initial_single_photon_left,
    oracle_propagate,
    propagate,
    rhs,
)
from .observables import (  # noqa: E402
    ConditionalMechanicalState,
    cat_overlap,
    displacement,
    fidelity,
    leaked_phonon_estimate,
    phonon_number,
    photon_probabilities,
    project_photon,
)
