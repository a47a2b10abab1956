"""
How close is the exact state to the closed form?
=================================================

The fidelity F(t) measures the overlap between the integrated state and the
approximate product state cos(Jt)|1,0>|beta> - i sin(Jt)|0,1>|beta>.
Stronger modulation suppresses the unwanted phonon processes, but it also
strengthens counter-rotating terms near 4J, so the averaged fidelity depends
on the averaging window.
"""
import numpy as np

from mimsim import IntegrationConfig, fig2_params, initial_single_photon_left, propagate
from mimsim.observables import fidelity

runs = {}
for delta0 in (20.0, 40.0, 60.0):
    params = fig2_params(delta0)
    traj = propagate(params, initial_single_photon_left(36), IntegrationConfig(), 12.0)
    runs[delta0] = (traj.t, fidelity(traj, params))

for window in (6.0, 12.0):
    means = {d: f[t <= window].mean() for d, (t, f) in runs.items()}
    print(f"mean F over g0 t in [0, {window:g}]: "
          + ", ".join(f"delta0={d:g}: {m:.4f}" for d, m in means.items()))

t, f = runs[60.0]
print(f"delta0 = 60: lowest F on [0, 12] is {f.min():.4f} at g0 t = {t[f.argmin()]:.2f}")
