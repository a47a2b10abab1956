"""Expectation values, fidelities and photon-measurement projections."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import beta_of_t, coherent_coefficients, coherent_deficit
from .errors import FidelityConsistencyError, NoOutcomeError, UndefinedEstimateError

FIDELITY_OVERSHOOT = 1e-9
NO_OUTCOME_PROBABILITY = 1e-12


def _amplitudes(state):
    """Return ``(a, b, t)`` for a PhotonFockState or a Trajectory."""
    return np.asarray(state.a), np.asarray(state.b), state.t


def _checked_fidelity(f):
    f = np.asarray(f, dtype=float)
    if np.any(f > 1.0 + FIDELITY_OVERSHOOT):
        raise FidelityConsistencyError(
            f"fidelity {f.max():.12f} exceeds 1; exact state is not normalized or "
            "does not match the requested time"
        )
    return np.minimum(f, 1.0)


def fidelity(exact, params, t=None):
    """Squared overlap between an exact state and the closed-form state.

    ``exact`` may be a single state or a whole trajectory, in which case an
    array of fidelities is returned. The global phase of the closed form
    drops out, so the result is also defined at resonance.
    """
    a, b, ts = _amplitudes(exact)
    if t is not None and not np.allclose(t, ts, rtol=0, atol=1e-12):
        raise ValueError("t does not match the state's time")
    ts = np.asarray(ts, dtype=float)
    n_max = a.shape[-1] - 1
    c = coherent_coefficients(beta_of_t(params, ts), n_max)
    jt = params.hop_j * ts
    cos = np.cos(jt)[..., None]
    sin = np.sin(jt)[..., None]
    overlap = np.sum(c * (cos * np.conj(a) - 1j * sin * np.conj(b)), axis=-1)
    f = _checked_fidelity(np.abs(overlap) ** 2)
    return float(f) if f.ndim == 0 else f


def fidelity_deficit(params, t, n_max):
    """Coherent-state probability lost to truncation in :func:`fidelity`."""
    d = coherent_deficit(beta_of_t(params, np.asarray(t, dtype=float)), n_max)
    return float(d) if np.ndim(d) == 0 else d


def displacement(state):
    """Mechanical amplitude ``<b>``; vectorized over trajectories."""
    a, b, _ = _amplitudes(state)
    sq = np.sqrt(np.arange(1, a.shape[-1]))
    val = np.sum(sq * (np.conj(a[..., :-1]) * a[..., 1:] + np.conj(b[..., :-1]) * b[..., 1:]),
                 axis=-1)
    return complex(val) if np.ndim(val) == 0 else val


def phonon_number(state):
    a, b, _ = _amplitudes(state)
    m = np.arange(a.shape[-1])
    val = np.sum(m * (np.abs(a) ** 2 + np.abs(b) ** 2), axis=-1)
    return float(val) if np.ndim(val) == 0 else val


def photon_probabilities(state):
    """Probabilities ``(p_left, p_right)`` of finding the photon in each cavity."""
    a, b, _ = _amplitudes(state)
    pl = np.sum(np.abs(a) ** 2, axis=-1)
    pr = np.sum(np.abs(b) ** 2, axis=-1)
    if np.ndim(pl) == 0:
        return float(pl), float(pr)
    return pl, pr


def leaked_phonon_estimate(params):
    """Order-of-magnitude phonon number left once the photon has leaked out.

    ``g0^2 / (4 d^2 + 4 kappa_c^2)`` for ``1/kappa_c << t << 1/gamma_m``.
    """
    den = 4.0 * params.detuning ** 2 + 4.0 * params.kappa_c ** 2
    if den == 0.0:
        raise UndefinedEstimateError("needs kappa_c > 0 or omega_m != 2J")
    return params.g0 ** 2 / den


# -- photon measurement ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConditionalMechanicalState:
    """Normalized membrane state after detecting the photon in one cavity."""

    amplitudes: np.ndarray
    which_cavity: str
    probability: float
    t: float


def project_photon(state, which):
    """Measure the photon's location and return the membrane state left behind."""
    if which not in ("left", "right"):
        raise ValueError("which must be 'left' or 'right'")
    amps = np.asarray(state.a if which == "left" else state.b)
    p = float(np.sum(np.abs(amps) ** 2))
    if p <= NO_OUTCOME_PROBABILITY:
        raise NoOutcomeError(f"photon found in the {which} cavity with probability {p:.1e}")
    return ConditionalMechanicalState(amps / math.sqrt(p), which, p, state.t)


def coherent_overlap(alpha, beta):
    """``<alpha|beta>`` for untruncated coherent states."""
    alpha = complex(alpha)
    beta = complex(beta)
    return np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * abs(beta) ** 2 + alpha.conjugate() * beta)


def superposition_overlap(cond, beta, c_plus, c_minus):
    """``|<target|cond>|^2`` with target proportional to ``c_plus|beta> + c_minus|-beta>``.

    The target norm uses the exact coherent-state inner product.
    """
    amps = np.asarray(getattr(cond, "amplitudes", cond))
    n_max = amps.size - 1
    plus = coherent_coefficients(beta, n_max)
    minus = coherent_coefficients(-complex(beta), n_max)
    cross = np.conj(c_plus) * c_minus * coherent_overlap(beta, -complex(beta))
    norm2 = abs(c_plus) ** 2 + abs(c_minus) ** 2 + 2.0 * cross.real
    if not norm2 > 0:
        raise ValueError("target superposition has zero norm")
    amp = np.conj(c_plus) * np.vdot(plus, amps) + np.conj(c_minus) * np.vdot(minus, amps)
    return float(abs(amp) ** 2 / norm2)


def cat_overlap(cond, beta, rel_phase):
    """Overlap with the normalized cat ``|beta> + exp(i rel_phase)|-beta>``."""
    return superposition_overlap(cond, beta, 1.0, np.exp(1j * rel_phase))


def state_overlap(cond_a, cond_b):
    """``|<a|b>|^2`` between two normalized membrane states."""
    return float(abs(np.vdot(np.asarray(cond_a.amplitudes), np.asarray(cond_b.amplitudes))) ** 2)
