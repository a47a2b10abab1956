"""Closed-form rotating-wave solution for a photon injected in the left cavity.

Starting from ``|1,0>|0>_M`` the approximate state is

    exp(-i theta) exp(-i omega_c t) [cos(Jt)|1,0> - i sin(Jt)|0,1>] |beta(t)>_M

with ``beta(t) = g0 / (2 d) * (exp(-i omega_m t) - exp(-2iJt))`` and
``d = omega_m - 2J``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ResonanceError, TruncationError
from .params import is_resonant

DEFAULT_DEFICIT_TOLERANCE = 1e-9


def beta_of_t(params, t):
    """Coherent amplitude of the membrane at time ``t`` (scalar or array).

    Evaluated as ``-i g0 exp(-i(omega_m + 2J)t/2) sin(d t/2) / d``, an exact
    rewrite that has no cancellation near ``d = 0``. At resonance this
    becomes ``-i g0 t exp(-i omega_m t) / 2``.
    """
    t = np.asarray(t, dtype=float)
    d = params.detuning
    carrier = np.exp(-0.5j * (params.omega_m + 2.0 * params.hop_j) * t)
    if is_resonant(params):
        envelope = 0.5 * t
    else:
        envelope = np.sin(0.5 * d * t) / d
    beta = -1j * params.g0 * carrier * envelope
    return complex(beta) if beta.ndim == 0 else beta


def theta_of_t(params, t):
    """Global phase accumulated by the approximate state (unwrapped)."""
    if is_resonant(params):
        raise ResonanceError("theta(t) has no finite form at omega_m == 2J")
    t = np.asarray(t, dtype=float)
    d = params.detuning
    g2 = params.g0 ** 2
    theta = (0.5 * params.delta0 - g2 / (4.0 * d)) * t + g2 * np.sin(d * t) / (4.0 * d ** 2)
    return float(theta) if theta.ndim == 0 else theta


def max_abs_beta(params, t_end):
    """Upper bound on |beta(t)| for t in [0, t_end]."""
    linear = 0.5 * abs(params.g0) * t_end
    if is_resonant(params):
        return linear
    return min(abs(params.g0 / params.detuning), linear)


def coherent_coefficients(beta, n_max):
    """Fock amplitudes ``exp(-|beta|^2/2) beta^m / sqrt(m!)`` for m = 0..n_max.

    Computed in the log domain so large |beta| underflows gracefully instead
    of overflowing. ``beta`` may be an array; the Fock index is appended as
    the last axis.
    """
    beta = np.asarray(beta, dtype=complex)
    m = np.arange(n_max + 1)
    r = np.abs(beta)[..., None]
    phase = np.exp(1j * m * np.angle(beta)[..., None])
    zero = r == 0
    log_r = np.log(np.where(zero, 1.0, r))
    log_mag = -0.5 * r ** 2 + m * log_r - 0.5 * gammaln(m + 1)
    # beta = 0 is the vacuum
    log_mag = np.where(zero & (m > 0), -np.inf, log_mag)
    return np.exp(log_mag) * phase


def coherent_deficit(beta, n_max):
    """Probability of a coherent state lying above level ``n_max``."""
    c = coherent_coefficients(beta, n_max)
    return np.clip(1.0 - np.sum(np.abs(c) ** 2, axis=-1), 0.0, None)


@dataclass(frozen=True)
class AnalyticState:
    theta: float
    beta: complex
    cos_jt: float
    sin_jt: float
    t: float


def analytic_state(params, t):
    """Phase, coherent amplitude and photon weights of the closed form at ``t``.

    ``theta`` is NaN at resonance, where it is undefined.
    """
    theta = float("nan") if is_resonant(params) else theta_of_t(params, t)
    jt = params.hop_j * t
    return AnalyticState(
        theta=theta,
        beta=beta_of_t(params, t),
        cos_jt=float(np.cos(jt)),
        sin_jt=float(np.sin(jt)),
        t=float(t),
    )


def approx_amplitudes(params, t, n_max, *, global_phase=True,
                      tolerance=DEFAULT_DEFICIT_TOLERANCE):
    """Expand the closed-form state into Fock amplitudes on ``0..n_max``.

    Parameters
    ----------
    params : ModelParams
    t : float
    n_max : int
        Highest phonon level kept.
    global_phase : bool
        Include ``exp(-i theta - i omega_c t)``. Must be False at resonance.
    tolerance : float
        Largest coherent-state probability allowed above ``n_max``.

    Returns
    -------
    PhotonFockState
    """
    from .fock import PhotonFockState

    st = analytic_state(params, t)
    deficit = float(coherent_deficit(st.beta, n_max))
    if deficit > tolerance:
        raise TruncationError(t, deficit, tolerance, n_max)
    c = coherent_coefficients(st.beta, n_max)
    phase = 1.0
    if global_phase:
        if is_resonant(params):
            raise ResonanceError("global phase undefined at resonance; pass global_phase=False")
        phase = np.exp(-1j * (st.theta + params.omega_c * t))
    return PhotonFockState(
        a=phase * st.cos_jt * c,
        b=-1j * phase * st.sin_jt * c,
        t=t,
    )


def approx_superposition(params, t, n_max, sign=+1, **kwargs):
    """Closed-form state for the initial photon ``(|1,0> + sign |0,1>)/sqrt(2)``.

    The right-cavity part is obtained from the left one by mirror symmetry:
    evolve ``|1,0>`` under mirrored parameters, then swap the cavities.
    """
    from .fock import PhotonFockState

    left = approx_amplitudes(params, t, n_max, **kwargs)
    mirror = approx_amplitudes(params.mirrored(), t, n_max, **kwargs)
    s = 1.0 / np.sqrt(2.0)
    return PhotonFockState(
        a=s * (left.a + sign * mirror.b),
        b=s * (left.b + sign * mirror.a),
        t=t,
    )
