"""Scenario runners behind the command line.

Each ``run_*`` function takes a :class:`ScenarioConfig`, returns a
:class:`~mimsim.table.Table` and, when ``cfg.output_path`` is set, writes it
as CSV (plus an SVG line plot if ``cfg.emit_svg``). Parameter sweeps fan out
over a process pool and are sorted before writing, so serial and parallel
runs produce identical files.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np

from . import __version__
from .analytic import approx_superposition, beta_of_t
from .errors import AccuracyError, ConfigError, NoOutcomeError
from .fock import (
    IntegrationConfig,
    initial_photon_superposition,
    initial_single_photon_left,
    oracle_propagate,
    propagate,
)
from .observables import (
    displacement,
    fidelity,
    fidelity_deficit,
    leaked_phonon_estimate,
    project_photon,
    state_overlap,
)
from .params import ConditionThresholds, ModelParams, check_conditions, derived_quantities
from .svg import write_line_plot
from .table import Table

SCENARIOS = (
    "fidelity-sweep",
    "displacement",
    "f-vs-delta0",
    "protocol",
    "check-conditions",
    "estimate-phonon",
    "oracle-check",
)

ORACLE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    params: ModelParams
    integration: IntegrationConfig = field(default_factory=IntegrationConfig)
    delta0_values: tuple = ()
    hop_j_values: tuple = ()
    detuning: Optional[float] = None
    t_end: Optional[float] = None
    measure_time: Union[str, float] = "ts"
    sign: int = +1
    thresholds: ConditionThresholds = field(default_factory=ConditionThresholds)
    oracle_tolerance: float = ORACLE_TOLERANCE
    output_path: Optional[Path] = None
    emit_svg: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        for name in ("delta0_values", "hop_j_values"):
            values = tuple(float(v) for v in getattr(self, name))
            if not all(math.isfinite(v) for v in values):
                raise ConfigError(f"{name} must be finite")
            object.__setattr__(self, name, values)
        if self.t_end is not None and not self.t_end > 0:
            raise ConfigError("t_end must be positive")
        if self.sign not in (+1, -1):
            raise ConfigError("sign must be + or -")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @property
    def sweep_delta0(self):
        return self.delta0_values or (self.params.delta0,)

    @property
    def sweep_hop_j(self):
        return self.hop_j_values or (self.params.hop_j,)

    def metadata(self):
        meta = [("mimsim_version", __version__), ("scenario", self.scenario)]
        meta += [(k, v) for k, v in self.params.as_dict().items()]
        if self.delta0_values:
            meta.append(("delta0_values", " ".join("%.17g" % v for v in self.delta0_values)))
        if self.hop_j_values:
            meta.append(("hop_j_values", " ".join("%.17g" % v for v in self.hop_j_values)))
        for key in ("detuning", "t_end", "measure_time", "sign", "oracle_tolerance"):
            meta.append((key, getattr(self, key)))
        meta += [("warn_factor", self.thresholds.warn_factor),
                 ("fail_factor", self.thresholds.fail_factor)]
        return meta


def _parallel_map(fn, items, workers):
    items = list(items)
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _finish(cfg, table, plot=None):
    if cfg.output_path is not None:
        path = table.write(cfg.output_path)
        if cfg.emit_svg and plot is not None:
            x, series, labels = plot
            write_line_plot(Path(path).with_suffix(".svg"), x, series, **labels)
    return table


def _with_context(exc, context):
    exc.args = (f"{context}: {exc.args[0] if exc.args else exc}",)
    return exc


def _shared_integration(cfg, points, t_end):
    """One dt/stride/n_max for every point so all runs share a time grid."""
    resolved = [cfg.integration.resolve(p, t_end) for p in points]
    dt = min(r[0] for r in resolved)
    integ = replace(cfg.integration, dt=dt)
    stride = integ.resolve(points[0], t_end)[1]
    return replace(integ, sample_stride=stride, n_max=max(r[2] for r in resolved))


def _integration_meta(integ):
    return [(f"integration.{k}", getattr(integ, k)) for k in
            ("dt", "sample_stride", "n_max", "norm_drift_budget", "tail_tolerance",
             "points_per_period", "sample_spacing")]


def _resolved(integ, params, t_end):
    dt, stride, n_max = integ.resolve(params, t_end)
    return replace(integ, dt=dt, sample_stride=stride, n_max=n_max)


def _require_t_end(cfg):
    if cfg.t_end is None:
        raise ConfigError(f"{cfg.scenario} needs t_end")
    return cfg.t_end


# -- fidelity and displacement versus time ---------------------------------------


def _left_photon_run(job):
    params, integ, t_end = job
    try:
        traj = propagate(params, initial_single_photon_left(integ.n_max), integ, t_end)
    except AccuracyError as exc:
        raise _with_context(exc, f"delta0={params.delta0:g}")
    return traj.t, fidelity(traj, params), fidelity_deficit(params, traj.t, traj.n_max), \
        np.abs(displacement(traj))


def _time_series(cfg):
    t_end = _require_t_end(cfg)
    points = [cfg.params.replace(delta0=d) for d in sorted(cfg.sweep_delta0)]
    integ = _shared_integration(cfg, points, t_end)
    results = _parallel_map(_left_photon_run, [(p, integ, t_end) for p in points], cfg.workers)
    return points, integ, results


def run_fidelity_sweep(cfg):
    """Fidelity of the exact state against the closed form, per modulation amplitude."""
    points, integ, results = _time_series(cfg)
    table = Table(["g0_t", "delta0_over_g0", "fidelity", "tail_deficit"],
                  metadata=cfg.metadata() + _integration_meta(integ))
    for p, (t, f, deficit, _) in zip(points, results):
        table.rows += [(ti, p.delta0, fi, di) for ti, fi, di in zip(t, f, deficit)]
    plot = ({f"delta0={p.delta0:g}": r[0] for p, r in zip(points, results)},
            {f"delta0={p.delta0:g}": r[1] for p, r in zip(points, results)},
            dict(xlabel="g0 t", ylabel="F(t)", title="fidelity"))
    return _finish(cfg, table, plot)


def _delta_label(value):
    return "abs_b_delta0_" + ("%.17g" % value)


def run_displacement(cfg):
    """Exact |<b>| per modulation amplitude next to the closed-form |beta(t)|."""
    points, integ, results = _time_series(cfg)
    t = results[0][0]
    analytic = np.abs(beta_of_t(cfg.params, t))
    columns = ["g0_t"] + [_delta_label(p.delta0) for p in points] + ["abs_beta_analytic"]
    table = Table(columns, metadata=cfg.metadata() + _integration_meta(integ))
    for i, ti in enumerate(t):
        table.rows.append((ti, *[r[3][i] for r in results], analytic[i]))
    series = {f"delta0={p.delta0:g}": r[3] for p, r in zip(points, results)}
    series["analytic"] = analytic
    return _finish(cfg, table, (t, series, dict(xlabel="g0 t", ylabel="|<b>|",
                                                title="mechanical displacement")))


# -- fidelity at the displacement peak versus delta0 -----------------------------


def _peak_fidelity(job):
    params, integ, t_s = job
    try:
        traj = propagate(params, initial_single_photon_left(integ.resolve(params, t_s)[2]),
                         integ, t_s)
    except AccuracyError as exc:
        raise _with_context(exc, f"delta0={params.delta0:g}, hop_j={params.hop_j:g}")
    return fidelity(traj.final, params)


def run_f_vs_delta0(cfg):
    """F(t_s) over a (hop_j, delta0) grid at fixed omega_m - 2J."""
    detuning = cfg.detuning if cfg.detuning is not None else cfg.params.detuning
    if detuning == 0:
        raise ConfigError("f-vs-delta0 needs a non-zero detuning omega_m - 2J")
    t_s = math.pi / abs(detuning)
    grid = [(j, d) for j in sorted(cfg.sweep_hop_j) for d in sorted(cfg.sweep_delta0)]
    jobs = [(cfg.params.replace(hop_j=j, omega_m=2.0 * j + detuning, delta0=d),
             cfg.integration, t_s) for j, d in grid]
    values = _parallel_map(_peak_fidelity, jobs, cfg.workers)
    meta = cfg.metadata() + [("t_s", t_s)] + _integration_meta(cfg.integration)
    table = Table(["delta0_over_g0", "hop_j_over_g0", "fidelity_ts"], metadata=meta)
    table.rows = [(d, j, f) for (j, d), f in zip(grid, values)]
    xs, series = {}, {}
    for j in sorted(cfg.sweep_hop_j):
        rows = [r for r in table.rows if r[1] == j]
        xs[f"J={j:g}"] = [r[0] for r in rows]
        series[f"J={j:g}"] = [r[2] for r in rows]
    return _finish(cfg, table, (xs, series, dict(xlabel="delta0 / g0", ylabel="F(t_s)",
                                                 title="fidelity at the first displacement peak")))


# -- superposition protocol --------------------------------------------------------


def measurement_time(params, which):
    """Resolve ``'ts'``, ``'treturn'`` or a number to a time."""
    if not isinstance(which, str):
        return float(which)
    dq = derived_quantities(params)
    if dq.resonant:
        raise ConfigError("t_s and t_return are undefined at resonance; give a numeric time")
    if which == "ts":
        return dq.t_s
    if which == "treturn":
        return dq.t_return
    raise ConfigError(f"measure_time must be 'ts', 'treturn' or a number, got {which!r}")


def run_protocol(cfg):
    """Prepare a delocalized photon, evolve, detect the photon, score the membrane state."""
    params = cfg.params
    t_m = measurement_time(params, cfg.measure_time)
    integ = _resolved(cfg.integration, params, t_m)
    n_max = integ.n_max
    traj = propagate(params, initial_photon_superposition(n_max, cfg.sign), integ, t_m)
    exact = traj.final
    ideal = approx_superposition(params, t_m, n_max, cfg.sign)
    beta = beta_of_t(params, t_m)
    meta = cfg.metadata() + [("t_measure", t_m), ("beta_re", beta.real), ("beta_im", beta.imag),
                             ("total_norm2", exact.norm2)] + _integration_meta(integ)
    table = Table(["outcome", "probability", "cat_overlap", "phonon_number"], metadata=meta)
    for which in ("left", "right"):
        p = float(np.sum(np.abs(exact.a if which == "left" else exact.b) ** 2))
        try:
            cond = project_photon(exact, which)
        except NoOutcomeError:
            table.rows.append((which, p, None, None))
            continue
        try:
            overlap = state_overlap(cond, project_photon(ideal, which))
        except NoOutcomeError:
            overlap = None
        n = float(np.sum(np.arange(n_max + 1) * np.abs(cond.amplitudes) ** 2))
        table.rows.append((which, cond.probability, overlap, n))
    return _finish(cfg, table)


# -- diagnostics -------------------------------------------------------------------


def run_check_conditions(cfg):
    report = check_conditions(cfg.params, cfg.thresholds)
    dq = derived_quantities(cfg.params)
    meta = cfg.metadata() + [("detuning", dq.detuning), ("beta_max", dq.beta_max),
                             ("t_s", dq.t_s), ("t_return", dq.t_return),
                             ("resonant", dq.resonant), ("static_ratio", report.static_ratio)]
    table = Table(["condition", "ratio", "level"], rows=report.rows(), metadata=meta)
    return _finish(cfg, table)


def run_estimate_phonon(cfg):
    p = cfg.params
    table = Table(["detuning", "kappa_c", "leaked_phonons"],
                  rows=[(p.detuning, p.kappa_c, leaked_phonon_estimate(p))],
                  metadata=cfg.metadata())
    return _finish(cfg, table)


@dataclass
class OracleReport:
    passed: bool
    max_deviation: float
    tolerance: float
    table: Table


def run_oracle_check(cfg):
    """Compare the RK4 trajectory with chained matrix-exponential steps."""
    params = cfg.params
    t_end = _require_t_end(cfg)
    integ = _resolved(cfg.integration, params, t_end)
    n_max = integ.n_max
    state0 = initial_single_photon_left(n_max)
    rk = propagate(params, state0, integ, t_end)
    ref = oracle_propagate(params, state0, rk.t)
    dev = np.max(np.abs(rk.vectors() - ref.vectors()), axis=1)
    worst = float(dev.max())
    passed = worst <= cfg.oracle_tolerance
    meta = cfg.metadata() + [("max_deviation", worst), ("passed", passed)] + _integration_meta(integ)
    table = Table(["g0_t", "deviation"], rows=list(zip(rk.t, dev)), metadata=meta)
    _finish(cfg, table, (rk.t, {"max |rk - expm|": dev},
                         dict(xlabel="g0 t", ylabel="deviation", title="oracle check")))
    return OracleReport(passed, worst, cfg.oracle_tolerance, table)


RUNNERS = {
    "fidelity-sweep": run_fidelity_sweep,
    "displacement": run_displacement,
    "f-vs-delta0": run_f_vs_delta0,
    "protocol": run_protocol,
    "check-conditions": run_check_conditions,
    "estimate-phonon": run_estimate_phonon,
    "oracle-check": run_oracle_check,
}
