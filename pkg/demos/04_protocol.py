"""
Preparing a membrane superposition
==================================

Start with the photon delocalized over both cavities, let the system evolve
until |beta| is largest, then detect which cavity holds the photon. The left
and right branches push the membrane in opposite directions, so the
conditional membrane state is a superposition of |beta> and |-beta>.
"""
import numpy as np

from mimsim import IntegrationConfig, fig2_params, initial_photon_superposition, propagate
from mimsim.analytic import approx_superposition, beta_of_t
from mimsim.observables import phonon_number, project_photon, state_overlap

params = fig2_params()
t_s = np.pi / params.detuning
n_max = 36

state = propagate(params, initial_photon_superposition(n_max, +1), IntegrationConfig(), t_s).final
ideal = approx_superposition(params, t_s, n_max, +1)
print(f"beta(t_s) = {beta_of_t(params, t_s):.4f}")

for which in ("left", "right"):
    cond = project_photon(state, which)
    target = project_photon(ideal, which)
    n = float(np.sum(np.arange(n_max + 1) * np.abs(cond.amplitudes) ** 2))
    print(f"photon {which:5s}: probability {cond.probability:.3f}, "
          f"overlap with ideal branch {state_overlap(cond, target):.4f}, phonons {n:.3f}")

print(f"phonons before detection: {phonon_number(state):.3f}")
