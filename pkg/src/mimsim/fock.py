"""Exact single-photon dynamics on a truncated phonon ladder.

With one photon shared between the cavities the state is

    sum_m [A_m |1,0> + B_m |0,1>] |m>_M

and the Schrödinger equation reduces to coupled linear ODEs for ``A_m`` and
``B_m``. :func:`propagate` integrates them with fixed-step RK4;
:func:`expm_oracle_step` is an independent check built from dense matrix
exponentials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernel
from .analytic import max_abs_beta
from .errors import InvalidTruncationError, NormDriftError, StepSizeError, TruncationError

POINTS_PER_PERIOD = 400
ORACLE_POINTS_PER_PERIOD = 200
DEFAULT_SAMPLE_SPACING = 0.005


def _frozen(x):
    arr = np.array(x, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PhotonFockState:
    """Amplitudes ``a[m]`` (photon left) and ``b[m]`` (photon right) at time ``t``."""

    a: np.ndarray
    b: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        a = _frozen(self.a)
        b = _frozen(self.b)
        if a.ndim != 1 or a.shape != b.shape:
            raise InvalidTruncationError("a and b must be 1-d arrays of equal length")
        if a.size < 2:
            raise InvalidTruncationError("phonon ladder needs n_max >= 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n_max(self):
        return self.a.size - 1

    @property
    def norm2(self):
        return float(np.sum(np.abs(self.a) ** 2) + np.sum(np.abs(self.b) ** 2))

    @property
    def tail(self):
        """Occupation of the highest retained phonon level."""
        return float(abs(self.a[-1]) ** 2 + abs(self.b[-1]) ** 2)

    def vector(self):
        return np.concatenate([self.a, self.b])

    @classmethod
    def from_vector(cls, vec, t=0.0):
        vec = np.asarray(vec)
        half = vec.size // 2
        return cls(vec[:half], vec[half:], t)

    def padded(self, n_max):
        if n_max < self.n_max:
            raise InvalidTruncationError(f"cannot shrink ladder from {self.n_max} to {n_max}")
        extra = n_max - self.n_max
        return PhotonFockState(np.pad(self.a, (0, extra)), np.pad(self.b, (0, extra)), self.t)

    def mirrored(self):
        """Swap the cavities."""
        return PhotonFockState(self.b, self.a, self.t)


def _check_n_max(n_max):
    if int(n_max) != n_max or n_max < 1:
        raise InvalidTruncationError(f"n_max must be an integer >= 1, got {n_max!r}")
    return int(n_max)


def initial_single_photon_left(n_max):
    """Photon in the left cavity, membrane in its ground state."""
    n_max = _check_n_max(n_max)
    a = np.zeros(n_max + 1, complex)
    a[0] = 1.0
    return PhotonFockState(a, np.zeros(n_max + 1, complex), 0.0)


def initial_photon_superposition(n_max, sign=+1):
    """``(|1,0> + sign |0,1>)/sqrt(2)`` with the membrane in its ground state."""
    n_max = _check_n_max(n_max)
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    a = np.zeros(n_max + 1, complex)
    b = np.zeros(n_max + 1, complex)
    a[0] = 1.0 / math.sqrt(2.0)
    b[0] = sign / math.sqrt(2.0)
    return PhotonFockState(a, b, 0.0)


# -- step size and truncation rules -------------------------------------------


def max_frequency(params):
    return max(2.0 * params.hop_j, params.omega_m, abs(params.delta0), abs(params.g0))


def default_dt(params, points_per_period=POINTS_PER_PERIOD):
    """``2 pi / (points_per_period * f_max)`` with f_max the fastest rate."""
    f = max_frequency(params)
    return 2.0 * math.pi / (points_per_period * (f if f > 0 else 1.0))


def default_n_max(params, t_end):
    """Ladder length that holds the largest coherent amplitude reached by ``t_end``."""
    b = max_abs_beta(params, t_end)
    return max(30, math.ceil((b + 4.0) ** 2))


@dataclass(frozen=True)
class IntegrationConfig:
    """Fixed-step integration settings.

    ``None`` fields are resolved from the parameters: ``dt`` via
    :func:`default_dt`, ``n_max`` via :func:`default_n_max`, and
    ``sample_stride`` so samples are about ``sample_spacing`` apart.
    """

    dt: Optional[float] = None
    sample_stride: Optional[int] = None
    n_max: Optional[int] = None
    norm_drift_budget: float = 1e-6
    tail_tolerance: float = 1e-10
    points_per_period: float = POINTS_PER_PERIOD
    sample_spacing: float = DEFAULT_SAMPLE_SPACING

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise StepSizeError("dt must be positive")
        if self.sample_stride is not None and (int(self.sample_stride) != self.sample_stride
                                               or self.sample_stride < 1):
            raise ValueError("sample_stride must be an integer >= 1")
        if self.n_max is not None:
            _check_n_max(self.n_max)
        if not (self.norm_drift_budget > 0 and self.tail_tolerance > 0):
            raise ValueError("tolerances must be positive")
        if not (self.points_per_period > 0 and self.sample_spacing > 0):
            raise ValueError("points_per_period and sample_spacing must be positive")

    def resolve(self, params, t_end):
        """Concrete ``(dt, stride, n_max)`` for a run of length ``t_end``."""
        dt = self.dt if self.dt is not None else default_dt(params, self.points_per_period)
        stride = self.sample_stride
        if stride is None:
            stride = max(1, int(self.sample_spacing / dt))
        n_max = self.n_max if self.n_max is not None else default_n_max(params, t_end)
        return dt, int(stride), int(n_max)


# -- equations of motion ------------------------------------------------------


def rhs(params, state, t):
    """Time derivatives ``(dA, dB)`` of the amplitudes at time ``t``.

    Amplitudes beyond the top of the ladder are taken as zero.
    """
    a, b = state.a, state.b
    m = np.arange(a.size)
    sq = np.sqrt(m[1:])
    mod = params.delta0 * math.cos(2.0 * params.hop_j * t)
    base = params.omega_c + m * params.omega_m

    def ladder(x):
        out = np.zeros_like(x)
        out[:-1] += sq * x[1:]  # sqrt(m+1) x_{m+1}
        out[1:] += sq * x[:-1]  # sqrt(m) x_{m-1}
        return out

    da = -1j * ((base + mod) * a + params.hop_j * b) - 1j * params.g0 * ladder(a)
    db = -1j * ((base - mod) * b + params.hop_j * a) + 1j * params.g0 * ladder(b)
    return da, db


def hamiltonian(params, n_max, t):
    """Dense Hamiltonian on ``[A_0..A_n, B_0..B_n]`` at time ``t``."""
    n = n_max + 1
    m = np.arange(n)
    mod = params.delta0 * math.cos(2.0 * params.hop_j * t)
    base = params.omega_c + m * params.omega_m
    h = np.zeros((2 * n, 2 * n))
    h[m, m] = base + mod
    h[n + m, n + m] = base - mod
    h[m, n + m] = h[n + m, m] = params.hop_j
    up = np.sqrt(m[1:]) * params.g0
    h[m[:-1], m[1:]] = h[m[1:], m[:-1]] = up
    h[n + m[:-1], n + m[1:]] = h[n + m[1:], n + m[:-1]] = -up
    return h


# -- trajectories ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled states; ``a`` and ``b`` have shape ``(len(t), n_max + 1)``."""

    t: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __len__(self):
        return self.t.size

    def __getitem__(self, i):
        return PhotonFockState(self.a[i], self.b[i], self.t[i])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def final(self):
        return self[-1]

    @property
    def n_max(self):
        return self.a.shape[1] - 1

    def vectors(self):
        return np.concatenate([self.a, self.b], axis=1)

    def norm2(self):
        return np.sum(np.abs(self.a) ** 2, axis=1) + np.sum(np.abs(self.b) ** 2, axis=1)

    def tail(self):
        return np.abs(self.a[:, -1]) ** 2 + np.abs(self.b[:, -1]) ** 2


def _split_span(span, dt):
    """Number of whole steps in ``span`` and the leftover partial step."""
    q = span / dt
    k = round(q)
    if abs(q - k) <= 1e-9 * max(1.0, q):
        return int(k), 0.0
    k = math.floor(q)
    return int(k), span - k * dt


def _frame_phase(params, n, t):
    return np.exp(-1j * np.outer(t, params.omega_c + np.arange(n) * params.omega_m))


def propagate(params, state0, cfg=None, t_end=None):
    """Integrate from ``state0`` to ``t_end`` with classical RK4.

    Samples are taken every ``stride`` steps, and the final time ``t_end`` is
    always included (reached with a shortened last step if needed). Each
    sample is checked against the norm-drift budget and the truncation
    tolerance.

    Raises
    ------
    NormDriftError
        If ``|norm^2 - norm0^2|`` exceeds ``cfg.norm_drift_budget``.
    TruncationError
        If the top phonon level holds more than ``cfg.tail_tolerance``.
    """
    cfg = cfg or IntegrationConfig()
    if t_end is None or not t_end > state0.t:
        raise ValueError(f"t_end must exceed the initial time {state0.t}")
    dt, stride, n_max = cfg.resolve(params, t_end - state0.t)
    if cfg.n_max is not None and cfg.n_max != state0.n_max:
        state0 = state0.padded(n_max)
    n = state0.n_max + 1
    t0 = state0.t
    nsteps, rest = _split_span(t_end - t0, dt)

    phase0 = _frame_phase(params, n, [t0])[0]
    fa = np.ascontiguousarray(np.conj(phase0) * state0.a)
    fb = np.ascontiguousarray(np.conj(phase0) * state0.b)
    nsamp = nsteps // stride + 1
    out_a = np.empty((nsamp, n), complex)
    out_b = np.empty((nsamp, n), complex)
    fa, fb = _kernel.rk4_frame(fa, fb, t0, dt, nsteps, stride, params.omega_m,
                               params.hop_j, params.g0, params.delta0, out_a, out_b)
    times = t0 + np.arange(nsamp) * stride * dt
    if rest > 0:
        last_a = np.empty((2, n), complex)
        last_b = np.empty((2, n), complex)
        _kernel.rk4_frame(fa, fb, t0 + nsteps * dt, rest, 1, 1, params.omega_m,
                          params.hop_j, params.g0, params.delta0, last_a, last_b)
        fa, fb = last_a[1], last_b[1]
    if rest > 0 or nsteps % stride:
        out_a = np.vstack([out_a, fa])
        out_b = np.vstack([out_b, fb])
        times = np.append(times, t_end)
    times[-1] = t_end

    phase = _frame_phase(params, n, times)
    traj = Trajectory(times, phase * out_a, phase * out_b)
    _check_accuracy(traj, state0.norm2, cfg)
    return traj


def _check_accuracy(traj, norm0, cfg):
    drift = np.abs(traj.norm2() - norm0)
    bad = np.flatnonzero(drift > cfg.norm_drift_budget)
    if bad.size:
        i = bad[0]
        raise NormDriftError(traj.t[i], drift[i], cfg.norm_drift_budget)
    tail = traj.tail()
    bad = np.flatnonzero(tail > cfg.tail_tolerance)
    if bad.size:
        i = bad[0]
        raise TruncationError(traj.t[i], tail[i], cfg.tail_tolerance, traj.n_max)


# -- matrix-exponential oracle --------------------------------------------------


def oracle_dt_limit(params):
    """Largest step accepted by :func:`expm_oracle_step`."""
    f = max(2.0 * params.hop_j, params.omega_m, abs(params.delta0), abs(params.g0))
    return math.inf if f == 0 else 2.0 * math.pi / (ORACLE_POINTS_PER_PERIOD * f)


def expm_oracle_step(params, state, dt):
    """Advance ``state`` by ``dt`` with the Hamiltonian frozen at mid-step.

    The propagator ``exp(-i H dt)`` is applied through an eigendecomposition
    of the Hermitian matrix, so the step is exactly unitary.
    """
    if not 0 < dt <= oracle_dt_limit(params) * (1 + 1e-12):
        raise StepSizeError(f"dt={dt:.3e} outside (0, {oracle_dt_limit(params):.3e}]")
    h = hamiltonian(params, state.n_max, state.t + 0.5 * dt)
    w, v = np.linalg.eigh(h)
    vec = v @ (np.exp(-1j * w * dt) * (v.conj().T @ state.vector()))
    return PhotonFockState.from_vector(vec, state.t + dt)


def oracle_propagate(params, state0, times, max_dt=None):
    """Chain oracle steps through ``times``, returning a :class:`Trajectory`.

    Each interval between consecutive sample times is split into equal steps
    no longer than ``max_dt`` (default: 1/32 of the oracle step limit).
    """
    if max_dt is None:
        max_dt = oracle_dt_limit(params) / 32.0
    times = np.asarray(times, dtype=float)
    state = state0
    a = [state0.a]
    b = [state0.b]
    for t_next in times[1:]:
        span = t_next - state.t
        k = max(1, math.ceil(span / max_dt - 1e-9))
        for _ in range(k):
            state = expm_oracle_step(params, state, span / k)
        state = PhotonFockState(state.a, state.b, t_next)
        a.append(state.a)
        b.append(state.b)
    return Trajectory(times.copy(), np.array(a), np.array(b))
