"""Pure-numpy fallback for the lab-frame propagation kernel.

Same contract as the compiled extension ``nverc._kernels._rk4``: classic
fixed-step RK4 on the matrix Schrodinger equation

    dU/dt = -i [Hs + cos(wc t - alpha) Ax + cos(wc t - beta) Ay] U

over one constant-drive segment, using global time (the carrier phase is
coherent across segments).  Returns the raw propagator; unitarity
projection happens in the caller.
"""

import numpy as np


def rk4_lab_segment(hs, ax, ay, wc, alpha, beta, t0, duration, n_steps, u0):
    """Propagate ``u0`` over ``[t0, t0 + duration]`` with ``n_steps`` RK4 steps."""
    if n_steps <= 0:
        raise ValueError("n_steps must be positive")
    h = duration / n_steps
    u = np.array(u0, dtype=complex, copy=True)
    mihs = -1j * np.asarray(hs, dtype=complex)
    miax = -1j * np.asarray(ax, dtype=complex)
    miay = -1j * np.asarray(ay, dtype=complex)
    t = t0
    for k in range(n_steps):
        t = t0 + k * h
        m1 = _rhs(mihs, miax, miay, wc, alpha, beta, t)
        m2 = _rhs(mihs, miax, miay, wc, alpha, beta, t + 0.5 * h)
        m4 = _rhs(mihs, miax, miay, wc, alpha, beta, t + h)
        k1 = m1 @ u
        k2 = m2 @ (u + (0.5 * h) * k1)
        k3 = m2 @ (u + (0.5 * h) * k2)
        k4 = m4 @ (u + h * k3)
        u += (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    return u


def _rhs(mihs, miax, miay, wc, alpha, beta, t):
    return mihs + np.cos(wc * t - alpha) * miax + np.cos(wc * t - beta) * miay
