"""
Sanity checks before a long run
===============================

The closed form rests on a few "much greater than" conditions. This script
prints them for two parameter sets, estimates the phonon number left behind
once the photon leaks out, and cross-checks the RK4 integrator against a
matrix-exponential propagator on a small instance.
"""
from mimsim import ModelParams, check_conditions, experiment_params, fig2_params
from mimsim.experiments import ScenarioConfig, run_oracle_check
from mimsim.fock import IntegrationConfig
from mimsim.observables import leaked_phonon_estimate

for name, params in (("fig2", fig2_params(60.0)), ("experiment", experiment_params())):
    print(f"{name}:")
    for row in check_conditions(params).rows():
        print("   %-16s %10.4g  %s" % row)

# Slow leakage leaves more phonons behind than fast leakage.
for kappa in (0.05, 0.1, 1.0):
    p = ModelParams(omega_m=200.75, hop_j=100.25, kappa_c=kappa)
    print(f"kappa_c = {kappa:4g}: leaked phonons ~ {leaked_phonon_estimate(p):.3f}")

small = ModelParams(omega_m=20.1, hop_j=10.025, delta0=4.0)
report = run_oracle_check(ScenarioConfig("oracle-check", small, t_end=1.0,
                                         integration=IntegrationConfig(n_max=10)))
print(f"oracle check: max deviation {report.max_deviation:.2e}, passed = {report.passed}")
