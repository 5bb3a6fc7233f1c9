"""Reference computations that share no code path with the package.

Used to freeze expected values and cross-check the production routes.
"""

import math

import numpy as np


def rk4_fixed(h, c0, t_end, dt=1e-4):
    """Classic fixed-step RK4 for i dc/dt = H c (time-independent H)."""
    h = np.asarray(h, dtype=complex)
    c = np.asarray(c0, dtype=complex).copy()
    n = int(round(t_end / dt))
    a = -1j * h
    for _ in range(n):
        k1 = a @ c
        k2 = a @ (c + 0.5 * dt * k1)
        k3 = a @ (c + 0.5 * dt * k2)
        k4 = a @ (c + dt * k3)
        c = c + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return c


def expm_taylor(a, terms=40):
    """exp(A) by scaled Taylor series and repeated squaring (no LAPACK, no Pade)."""
    a = np.asarray(a, dtype=complex)
    norm = np.max(np.sum(np.abs(a), axis=1))
    s = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    b = a / 2**s
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ b / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def uniform(n):
    return np.full(n, 1 / math.sqrt(n))


def bright_block_direct(h, n_g, n_e):
    """2x2 bright block from explicit uniform vectors, <b_i|H|b_j>."""
    bg = np.concatenate([uniform(n_g), np.zeros(n_e)])
    be = np.concatenate([np.zeros(n_g), uniform(n_e)])
    vecs = [bg, be]
    return np.array([[u @ h @ v for v in vecs] for u in vecs])
