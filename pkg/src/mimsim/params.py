"""Physical parameters of the modulated membrane-in-the-middle system.

All frequencies are angular frequencies. By convention the single-photon
coupling ``g0`` is the unit of frequency, so presets store ``g0 = 1`` and
times are measured in units of ``1/g0``. Use :meth:`ModelParams.from_absolute`
to ingest laboratory numbers.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import ParameterError

# |omega_m - 2 J| below this fraction of |g0| counts as exact resonance
RESONANCE_RTOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Rates and frequencies of the two-mode optomechanical Hamiltonian.

    Parameters
    ----------
    omega_m : float
        Mechanical frequency.
    hop_j : float
        Photon-hopping strength between left and right cavities.
    g0 : float
        Single-photon optomechanical coupling. A negative value is allowed
        and corresponds to the left/right mirrored system.
    delta0 : float
        Cavity-frequency modulation amplitude (sign flips under mirroring).
    omega_c : float
        Reference cavity frequency. Only contributes a global phase in the
        single-photon sector.
    kappa_c, gamma_m : float
        Cavity and mechanical damping rates. Only ``kappa_c`` is used, in
        :func:`mimsim.observables.leaked_phonon_estimate`.
    """

    omega_m: float
    hop_j: float
    g0: float = 1.0
    delta0: float = 0.0
    omega_c: float = 0.0
    kappa_c: float = 0.0
    gamma_m: float = 0.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ParameterError(f"{name} must be a real number, got {value!r}") from None
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        for name in ("omega_m", "hop_j", "kappa_c", "gamma_m"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative, got {getattr(self, name)}")

    @classmethod
    def from_absolute(cls, *, g0, **values):
        """Build parameters from absolute frequencies, normalizing by ``g0``."""
        if g0 <= 0:
            raise ParameterError("absolute g0 must be positive to serve as the unit")
        return cls(g0=1.0, **{k: v / g0 for k, v in values.items()})

    @property
    def detuning(self):
        """omega_m - 2 J, the effective mechanical frequency after modulation."""
        return self.omega_m - 2.0 * self.hop_j

    def mirrored(self):
        """Parameters of the left/right swapped system (delta0, g0 -> -delta0, -g0)."""
        return replace(self, delta0=-self.delta0, g0=-self.g0)

    def replace(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return asdict(self)


def is_resonant(params):
    d = abs(params.detuning)
    if params.g0 == 0.0:
        return d == 0.0
    return d < RESONANCE_RTOL * abs(params.g0)


def modulated_frequencies(params, t):
    """Return the instantaneous left and right cavity frequencies at time ``t``.

    Works elementwise on arrays of times.
    """
    shift = params.delta0 * np.cos(2.0 * params.hop_j * np.asarray(t, dtype=float))
    if np.ndim(shift) == 0:
        shift = float(shift)
    return params.omega_c + shift, params.omega_c - shift


# -- validity diagnostics ---------------------------------------------------


class Level(str, Enum):
    PASS = "pass"
    WARN = "warn"
    FAIL = "fail"


@dataclass(frozen=True)
class ConditionThresholds:
    """Factors used to decide whether ``x >> y`` holds.

    A "much greater than" ratio passes at ``>= warn_factor``, warns between
    ``fail_factor`` and ``warn_factor`` and fails below ``fail_factor``.
    """

    warn_factor: float = 8.0
    fail_factor: float = 2.0

    def __post_init__(self):
        if not 0 < self.fail_factor <= self.warn_factor:
            raise ParameterError("need 0 < fail_factor <= warn_factor")

    def grade(self, ratio):
        if ratio >= self.warn_factor:
            return Level.PASS
        if ratio >= self.fail_factor:
            return Level.WARN
        return Level.FAIL


@dataclass(frozen=True)
class ConditionReport:
    """Ratios testing the rotating-wave conditions, with per-ratio grades.

    ``detuning_ratio`` is |omega_m - 2J| / (g0/2) and must not exceed 1;
    ``hop_ratio`` is J / (5 delta0 / 16) and ``amp_ratio`` is delta0 / g0,
    both of which should be large. ``static_ratio`` = g0 / omega_m is the
    unmodulated single-photon displacement figure, reported for context.
    """

    detuning_ratio: float
    hop_ratio: float
    amp_ratio: float
    static_ratio: float
    levels: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(level is not Level.FAIL for level in self.levels.values())

    def rows(self):
        return [
            ("detuning_ratio", self.detuning_ratio, self.levels["detuning_ratio"].value),
            ("hop_ratio", self.hop_ratio, self.levels["hop_ratio"].value),
            ("amp_ratio", self.amp_ratio, self.levels["amp_ratio"].value),
        ]


def _ratio(num, den):
    if den == 0.0:
        return math.inf if num != 0.0 else math.nan
    return num / den


def check_conditions(params, thresholds=ConditionThresholds()):
    """Diagnose how well the rotating-wave conditions hold. Never raises."""
    g = abs(params.g0)
    d0 = abs(params.delta0)
    detuning_ratio = _ratio(abs(params.detuning), g / 2.0)
    hop_ratio = _ratio(params.hop_j, 5.0 * d0 / 16.0)
    amp_ratio = _ratio(d0, g)
    # 0/0 cases: no modulation and no hopping, or no coupling at all
    if math.isnan(detuning_ratio):
        detuning_ratio = 0.0
    if math.isnan(hop_ratio):
        hop_ratio = 0.0
    if math.isnan(amp_ratio):
        amp_ratio = 0.0
    levels = {
        "detuning_ratio": Level.PASS if detuning_ratio <= 1.0 else Level.FAIL,
        "hop_ratio": thresholds.grade(hop_ratio),
        "amp_ratio": thresholds.grade(amp_ratio),
    }
    static = _ratio(g, params.omega_m)
    return ConditionReport(
        detuning_ratio=detuning_ratio,
        hop_ratio=hop_ratio,
        amp_ratio=amp_ratio,
        static_ratio=0.0 if math.isnan(static) else static,
        levels=levels,
    )


class DerivedQuantities(NamedTuple):
    detuning: float
    beta_max: float
    t_s: float
    t_return: float
    resonant: bool


def derived_quantities(params):
    """Detuning, peak coherent amplitude and its characteristic times.

    ``t_s`` is the first time the approximate displacement peaks and
    ``t_return`` the first time it returns to zero. On resonance the
    displacement grows without bound: those fields are NaN and
    ``resonant`` is True.
    """
    d = params.detuning
    if is_resonant(params):
        return DerivedQuantities(0.0, math.nan, math.nan, math.nan, True)
    return DerivedQuantities(
        detuning=d,
        beta_max=params.g0 / d,
        t_s=math.pi / abs(d),
        t_return=2.0 * math.pi / abs(d),
        resonant=False,
    )


# -- presets ----------------------------------------------------------------

FIG2_DELTA0 = (20.0, 40.0, 60.0)


def fig2_params(delta0=40.0):
    """Working point of the fidelity/displacement study (omega_m=201, J=100.25)."""
    return ModelParams(omega_m=201.0, hop_j=100.25, g0=1.0, delta0=delta0)


def experiment_params():
    """Membrane example: omega_m/2pi = 1 MHz, g0/2pi = 1 kHz, delta0 = 40 g0.

    Normalized to g0. The hopping is chosen so that omega_m - 2J = g0/2 and
    the cavity damping is set to g0/10, inside the required g0 > kappa_c
    window.
    """
    # the 2*pi factors cancel in the normalization
    g0 = 1e3
    omega_m = 1e6
    return ModelParams.from_absolute(
        g0=g0,
        omega_m=omega_m,
        hop_j=(omega_m - 0.5 * g0) / 2.0,
        delta0=40.0 * g0,
        kappa_c=0.1 * g0,
    )


PRESETS = {
    "fig2": fig2_params,
    "experiment": experiment_params,
}
