"""Compiled RK4 loop for the single-photon amplitude equations.

The loop runs in the interaction frame of the static diagonal
``omega_c + m * omega_m``: with ``A_m = exp(-i(omega_c + m omega_m) t) a_m``
the diagonal drops out exactly and the ladder couplings pick up phases
``exp(-+i omega_m t)``. What is left oscillates at ~2J and omega_m instead of
at ``n_max * omega_m``, which keeps fixed-step RK4 accurate on long ladders.
"""
import numba
import numpy as np


@numba.njit(cache=True)
def frame_rhs(t, a, b, omega_m, hop_j, g0, delta0, sq, da, db):
    n = a.shape[0]
    c = delta0 * np.cos(2.0 * hop_j * t)
    down = np.exp(-1j * omega_m * t)  # couples m to m+1
    up = np.conj(down)  # couples m to m-1
    for m in range(n):
        la = 0j
        lb = 0j
        if m + 1 < n:
            la += down * sq[m] * a[m + 1]
            lb += down * sq[m] * b[m + 1]
        if m > 0:
            la += up * sq[m - 1] * a[m - 1]
            lb += up * sq[m - 1] * b[m - 1]
        da[m] = -1j * (c * a[m] + hop_j * b[m] + g0 * la)
        db[m] = -1j * ((-c) * b[m] + hop_j * a[m] + (-g0) * lb)


@numba.njit(cache=True)
def rk4_frame(a, b, t0, dt, nsteps, stride, omega_m, hop_j, g0, delta0, out_a, out_b):
    """Advance frame amplitudes ``nsteps`` steps, storing every ``stride``-th.

    Sample 0 is the input state. Returns the final amplitudes.
    """
    n = a.shape[0]
    sq = np.sqrt(np.arange(1.0, n + 0.0))
    k1a = np.empty(n, np.complex128)
    k1b = np.empty(n, np.complex128)
    k2a = np.empty(n, np.complex128)
    k2b = np.empty(n, np.complex128)
    k3a = np.empty(n, np.complex128)
    k3b = np.empty(n, np.complex128)
    k4a = np.empty(n, np.complex128)
    k4b = np.empty(n, np.complex128)
    ta = np.empty(n, np.complex128)
    tb = np.empty(n, np.complex128)
    a = a.copy()
    b = b.copy()
    h = 0.5 * dt
    out_a[0, :] = a
    out_b[0, :] = b
    j = 1
    for k in range(nsteps):
        t = t0 + k * dt
        frame_rhs(t, a, b, omega_m, hop_j, g0, delta0, sq, k1a, k1b)
        for i in range(n):
            ta[i] = a[i] + h * k1a[i]
            tb[i] = b[i] + h * k1b[i]
        frame_rhs(t + h, ta, tb, omega_m, hop_j, g0, delta0, sq, k2a, k2b)
        for i in range(n):
            ta[i] = a[i] + h * k2a[i]
            tb[i] = b[i] + h * k2b[i]
        frame_rhs(t + h, ta, tb, omega_m, hop_j, g0, delta0, sq, k3a, k3b)
        for i in range(n):
            ta[i] = a[i] + dt * k3a[i]
            tb[i] = b[i] + dt * k3b[i]
        frame_rhs(t + dt, ta, tb, omega_m, hop_j, g0, delta0, sq, k4a, k4b)
        for i in range(n):
            a[i] += dt / 6.0 * (k1a[i] + 2.0 * k2a[i] + 2.0 * k3a[i] + k4a[i])
            b[i] += dt / 6.0 * (k1b[i] + 2.0 * k2b[i] + 2.0 * k3b[i] + k4b[i])
        if (k + 1) % stride == 0:
            out_a[j, :] = a
            out_b[j, :] = b
            j += 1
    return a, b
