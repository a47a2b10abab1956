import math
from dataclasses import replace

import numpy as np
import pytest

from mimsim.config import build_config
from mimsim.errors import ConfigError, TruncationError
from mimsim.experiments import (
    ScenarioConfig,
    measurement_time,
    run_check_conditions,
    run_displacement,
    run_estimate_phonon,
    run_f_vs_delta0,
    run_fidelity_sweep,
    run_oracle_check,
    run_protocol,
)
from mimsim.fock import IntegrationConfig
from mimsim.params import ModelParams, fig2_params
from mimsim.table import read_csv

FAST = IntegrationConfig(sample_spacing=0.05)


def sweep_cfg(scenario, delta0s=(20.0, 40.0, 60.0), t_end=6.0, **kw):
    kw.setdefault("integration", FAST)
    return ScenarioConfig(scenario, fig2_params(), delta0_values=delta0s, t_end=t_end, **kw)


def test_fidelity_sweep_rows_and_sampling():
    cfg = sweep_cfg("fidelity-sweep", (60.0, 20.0), t_end=1.0,
                    integration=IntegrationConfig(dt=1e-4, sample_stride=70))
    table = run_fidelity_sweep(cfg)
    per_curve = math.ceil(1.0 / (1e-4 * 70)) + 1
    assert len(table.rows) == 2 * per_curve
    d0 = table.column("delta0_over_g0")
    assert d0 == sorted(d0) and set(d0) == {20.0, 60.0}
    t = table.column("g0_t")
    assert t[0] == 0.0 and t[per_curve - 1] == 1.0


def test_fidelity_sweep_trivial_limit():
    cfg = ScenarioConfig("fidelity-sweep", fig2_params(0.0).replace(g0=0.0), t_end=1.0,
                         integration=FAST)
    f = np.array(run_fidelity_sweep(cfg).column("fidelity"))
    assert np.all(np.abs(f - 1) <= 1e-10)


def test_fidelity_sweep_improves_from_weak_to_strong_modulation():
    table = run_fidelity_sweep(sweep_cfg("fidelity-sweep", (20.0, 60.0)))
    d0 = np.array(table.column("delta0_over_g0"))
    f = np.array(table.column("fidelity"))
    assert f[d0 == 60].mean() > f[d0 == 20].mean()
    assert f[d0 == 60].mean() >= 0.9


def test_fidelity_sweep_reports_offending_delta0():
    cfg = sweep_cfg("fidelity-sweep", (40.0,), t_end=3.0,
                    integration=IntegrationConfig(n_max=4))
    with pytest.raises(TruncationError, match="delta0=40"):
        run_fidelity_sweep(cfg)


def test_displacement_columns_and_peak():
    table = run_displacement(sweep_cfg("displacement", t_end=7.0))
    assert table.columns[0] == "g0_t" and table.columns[-1] == "abs_beta_analytic"
    t = np.array(table.column("g0_t"))
    analytic = np.array(table.column("abs_beta_analytic"))
    assert analytic.max() == pytest.approx(2.0, abs=1e-3)
    for name in table.columns[1:-1]:
        b = np.array(table.column(name))
        assert abs(b.max() - 2) <= 0.2
        assert abs(t[b.argmax()] - 2 * math.pi) <= 0.2 * math.pi


def test_displacement_analytic_zero_at_return_time():
    t_ret = 4 * math.pi
    cfg = sweep_cfg("displacement", (40.0,), t_end=t_ret)
    analytic = run_displacement(cfg).column("abs_beta_analytic")
    assert analytic[-1] <= 1e-12


def test_displacement_without_coupling():
    cfg = ScenarioConfig("displacement", fig2_params().replace(g0=0.0),
                         delta0_values=(20.0, 60.0), t_end=2.0, integration=FAST)
    table = run_displacement(cfg)
    for name in table.columns[1:]:
        assert not any(table.column(name))


def test_f_vs_delta0_small_grid():
    cfg = ScenarioConfig("f-vs-delta0", fig2_params(), hop_j_values=(100.25, 50.25),
                         delta0_values=(40.0, 0.0), detuning=0.5)
    table = run_f_vs_delta0(cfg)
    keys = [(r[1], r[0]) for r in table.rows]
    assert keys == sorted(keys) and len(keys) == 4
    f = {(r[1], r[0]): r[2] for r in table.rows}
    for j in (50.25, 100.25):
        assert f[(j, 40.0)] > 0.95
        assert f[(j, 0.0)] < f[(j, 40.0)] - 0.1
    assert dict(table.metadata)["t_s"] == pytest.approx(2 * math.pi)


def test_f_vs_delta0_needs_detuning():
    cfg = ScenarioConfig("f-vs-delta0", ModelParams(omega_m=200.5, hop_j=100.25, delta0=40))
    with pytest.raises(ConfigError):
        run_f_vs_delta0(cfg)


@pytest.mark.parametrize("sign", [+1, -1])
def test_protocol_fig2(sign):
    table = run_protocol(ScenarioConfig("protocol", fig2_params(), sign=sign))
    probs = table.column("probability")
    total = dict(table.metadata)["total_norm2"]
    assert sum(probs) == pytest.approx(total, abs=1e-8)
    for p, ov in zip(probs, table.column("cat_overlap")):
        assert 0.2 <= p <= 0.8
        assert ov >= 0.8


def test_protocol_without_coupling():
    table = run_protocol(ScenarioConfig("protocol", fig2_params().replace(g0=0.0),
                                        measure_time=1.0))
    assert table.column("cat_overlap") == pytest.approx([1.0, 1.0], abs=1e-12)
    assert table.column("phonon_number") == pytest.approx([0.0, 0.0], abs=1e-12)


def test_protocol_reports_missing_outcome(monkeypatch):
    from mimsim import experiments
    from mimsim.fock import Trajectory

    def parked_left(params, state0, cfg, t_end):
        a = np.zeros((1, state0.n_max + 1), complex)
        a[0, 0] = 1
        return Trajectory(np.array([t_end]), a, np.zeros_like(a))

    monkeypatch.setattr(experiments, "propagate", parked_left)
    table = run_protocol(ScenarioConfig("protocol", fig2_params()))
    assert table.rows[1] == ("right", 0.0, None, None)
    assert table.rows[0][1] == 1.0


def test_measurement_time():
    p = fig2_params()
    assert measurement_time(p, "ts") == pytest.approx(2 * math.pi)
    assert measurement_time(p, "treturn") == pytest.approx(4 * math.pi)
    assert measurement_time(p, 1.5) == 1.5
    with pytest.raises(ConfigError):
        measurement_time(ModelParams(omega_m=200.5, hop_j=100.25), "ts")


def test_check_conditions_and_phonon_estimate():
    table = run_check_conditions(ScenarioConfig("check-conditions", fig2_params()))
    assert [r[2] for r in table.rows] == ["pass"] * len(table.rows)
    p = ModelParams(omega_m=201, hop_j=100.25, kappa_c=0.1)
    est = run_estimate_phonon(ScenarioConfig("estimate-phonon", p))
    assert est.rows[0][2] == pytest.approx(1 / 1.04)


def oracle_cfg(**kw):
    p = ModelParams(omega_m=20.1, hop_j=10.025, delta0=4.0)
    return ScenarioConfig("oracle-check", p, integration=IntegrationConfig(n_max=10),
                          t_end=1.0, **kw)


def test_oracle_check_passes():
    report = run_oracle_check(oracle_cfg())
    assert report.passed and report.max_deviation <= 1e-6
    assert len(report.table.rows) > 10


def test_oracle_check_solvable_case():
    cfg = oracle_cfg()
    # at the default 400 points per period plain RK4 error on this case is ~3e-10
    cfg = replace(cfg, params=cfg.params.replace(g0=0.0, delta0=0.0),
                  integration=replace(cfg.integration, points_per_period=800))
    assert run_oracle_check(cfg).max_deviation <= 1e-10


def test_oracle_check_negative_control():
    from mimsim.fock import default_dt
    cfg = oracle_cfg()
    coarse = replace(cfg.integration, dt=10 * default_dt(cfg.params), norm_drift_budget=1.0)
    report = run_oracle_check(replace(cfg, integration=coarse))
    assert not report.passed


def test_config_validation():
    with pytest.raises(ConfigError):
        ScenarioConfig("nope", fig2_params())
    with pytest.raises(ConfigError):
        ScenarioConfig("protocol", fig2_params(), sign=0)
    with pytest.raises(ConfigError):
        ScenarioConfig("fidelity-sweep", fig2_params(), delta0_values=(float("nan"),))
    with pytest.raises(ConfigError):
        run_fidelity_sweep(ScenarioConfig("fidelity-sweep", fig2_params()))


def test_csv_round_trip_and_header(tmp_path):
    cfg = replace(sweep_cfg("fidelity-sweep", (40.0,), t_end=0.5), output_path=tmp_path / "f.csv")
    table = run_fidelity_sweep(cfg)
    back = read_csv(tmp_path / "f.csv")
    meta = dict(back.metadata)
    assert meta["mimsim_version"] and meta["scenario"] == "fidelity-sweep"
    for key in ("omega_m", "hop_j", "g0", "integration.dt", "integration.n_max"):
        assert key in meta
    assert back.columns == table.columns
    assert [float(x) for x in back.column("fidelity")] == table.column("fidelity")


@pytest.mark.parametrize("scenario", ["fidelity-sweep", "displacement", "f-vs-delta0"])
def test_parallel_matches_serial(tmp_path, scenario):
    overrides = {"delta0": "20,60", "t_end": "1", "sample_spacing": "0.05"}
    if scenario == "f-vs-delta0":
        overrides = {"hop_j": "50.25,100.25", "delta0": "10,40"}
    paths = []
    for workers in (1, 2):
        out = tmp_path / f"{scenario}-{workers}.csv"
        cfg = build_config(scenario, None, dict(overrides, workers=workers, out=out))
        paths.append(out)
        if scenario == "fidelity-sweep":
            run_fidelity_sweep(cfg)
        elif scenario == "displacement":
            run_displacement(cfg)
        else:
            run_f_vs_delta0(cfg)
    assert paths[0].read_bytes() == paths[1].read_bytes()
