"""Command-line entry point: ``mimsim <scenario> [options]``."""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import KEYS, OUTPUT_DIR_ENV, build_config
from .errors import AccuracyError, ConfigError, MimsimError
from .experiments import RUNNERS, SCENARIOS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ACCURACY = 3
EXIT_ORACLE = 4

HELP = {
    "fidelity-sweep": "fidelity F(t) of exact vs closed-form state for each delta0",
    "displacement": "exact |<b(t)>| for each delta0 next to the closed-form |beta(t)|",
    "f-vs-delta0": "F(t_s) over a (J, delta0) grid with omega_m - 2J fixed",
    "protocol": "photon-measurement protocol producing membrane superpositions",
    "check-conditions": "rotating-wave validity ratios",
    "estimate-phonon": "phonon number left after the photon leaks out",
    "oracle-check": "RK4 vs matrix-exponential cross-check",
}

# flag -> config key
FLAGS = {
    "--preset": "preset", "--units": "units",
    "--omega-m": "omega_m", "--hop-j": "hop_j", "--g0": "g0", "--delta0": "delta0",
    "--omega-c": "omega_c", "--kappa-c": "kappa_c", "--gamma-m": "gamma_m",
    "--detuning": "detuning",
    "--dt": "dt", "--sample-stride": "sample_stride", "--n-max": "n_max",
    "--norm-drift-budget": "norm_drift_budget", "--tail-tolerance": "tail_tolerance",
    "--points-per-period": "points_per_period", "--sample-spacing": "sample_spacing",
    "--t-end": "t_end", "--measure-time": "measure_time", "--sign": "sign",
    "--oracle-tolerance": "oracle_tolerance", "--workers": "workers",
    "--warn-factor": "warn_factor", "--fail-factor": "fail_factor",
    "--out": "out",
}


def _key_help():
    lines = ["config file keys (flag > file > default):"]
    for section, keys in KEYS.items():
        lines.append(f"  [{section}]")
        lines += [f"    {k:<18} {doc}" for k, doc in keys.items()]
    lines.append(f"default output directory: ${OUTPUT_DIR_ENV} (else the current directory)")
    lines.append("exit codes: 0 ok, 2 config error, 3 accuracy error, 4 oracle-check failure")
    return "\n".join(lines)


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="INI-style config file")
    common.add_argument("--svg", action="store_const", const="true", default=None,
                        help="also write an SVG line plot next to the CSV")
    for flag, key in FLAGS.items():
        common.add_argument(flag, dest=key, metavar=key.upper(), default=None,
                            help=next(doc for s in KEYS.values() for k, doc in s.items() if k == key))

    parser = argparse.ArgumentParser(
        prog="mimsim",
        description="Single-photon dynamics in a modulated two-mode optomechanical system.",
        epilog=_key_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"mimsim {__version__}")
    sub = parser.add_subparsers(dest="scenario", required=True, metavar="SCENARIO")
    for name in SCENARIOS:
        sub.add_parser(name, parents=[common], help=HELP[name], epilog=_key_help(),
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    overrides = {key: getattr(args, key) for key in FLAGS.values()}
    overrides["svg"] = args.svg
    try:
        cfg = build_config(args.scenario, args.config, overrides)
        result = RUNNERS[cfg.scenario](cfg)
    except ConfigError as exc:
        print(f"mimsim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AccuracyError as exc:
        print(f"mimsim: accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except MimsimError as exc:
        print(f"mimsim: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    print(f"wrote {cfg.output_path}")
    if cfg.scenario == "oracle-check":
        status = "pass" if result.passed else "FAIL"
        print(f"oracle-check {status}: max deviation {result.max_deviation:.3e} "
              f"(tolerance {result.tolerance:.1e})")
        if not result.passed:
            return EXIT_ORACLE
    elif cfg.scenario in ("check-conditions", "estimate-phonon", "protocol"):
        print(",".join(result.columns))
        for row in result.rows:
            print(",".join("" if x is None else (f"{x:.6g}" if isinstance(x, float) else str(x))
                           for x in row))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
