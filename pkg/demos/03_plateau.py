"""
A window of good modulation strengths
=====================================

F(t_s), the fidelity at the first displacement maximum, is high only when
g0 << delta0 and delta0 stays well below 16J/5. Raising J pushes the upper
edge out, so the window widens. A coarse grid keeps this demo quick.
"""
import numpy as np

from mimsim.experiments import ScenarioConfig, run_f_vs_delta0
from mimsim.params import fig2_params

grid = tuple(np.geomspace(5, 300, 10))
cfg = ScenarioConfig("f-vs-delta0", fig2_params(), hop_j_values=(50.25, 200.25),
                     delta0_values=grid, detuning=0.5)
table = run_f_vs_delta0(cfg)

print("delta0/g0   " + "   ".join(f"J={j:g}" for j in cfg.hop_j_values))
for d in grid:
    row = [r[2] for r in table.rows if r[0] == d]
    print(f"{d:9.1f}   " + "   ".join(f"{f:7.4f}" for f in row))
