"""Propagation of bound-state amplitudes, ``i dC/dt = H(t) C``, and ionization.

Two independent routes are provided. :func:`evolve_constant` exponentiates a
time-independent H (eigendecomposition, with scaling-and-squaring fallback for
defective or nearly defective H). :func:`evolve_timedep` integrates arbitrary
H(t) with an adaptive embedded Runge-Kutta scheme. They are used as oracles
for each other in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import solve_ivp

from .errors import IntegrationError, ParameterError

DEFAULT_SAMPLES = 500
EIG_CONDITION_LIMIT = 1e8
# per-step tolerance relative to the requested accuracy; local errors accumulate over many steps
LOCAL_TOLERANCE_FACTOR = 0.1


@dataclass(frozen=True)
class EvolutionResult:
    """Sampled amplitudes ``amplitudes[k, i] = c_i(times[k])``."""

    times: NDArray[np.float64]
    amplitudes: NDArray[np.complex128]
    labels: tuple[str, ...] | None = None
    method: str = ""

    @property
    def populations(self) -> NDArray[np.float64]:
        return np.abs(self.amplitudes) ** 2

    @property
    def ionization(self) -> NDArray[np.float64]:
        """Raw ``1 - sum_i |c_i|^2`` per sample (may dip a hair below 0)."""
        return ionization(self.amplitudes)

    @property
    def ionization_clamped(self) -> NDArray[np.float64]:
        return np.clip(self.ionization, 0.0, 1.0)

    @property
    def final_state(self) -> NDArray[np.complex128]:
        return self.amplitudes[-1]


def ionization(c: ArrayLike) -> float | NDArray[np.float64]:
    """Ionization ``I = 1 - sum_i |c_i|^2`` along the last axis."""
    c = np.asarray(c)
    value = 1.0 - np.sum(np.abs(c) ** 2, axis=-1)
    return float(value) if np.ndim(value) == 0 else value


def _validate(h: NDArray, c0: NDArray):
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ParameterError(f"Hamiltonian must be square, got shape {h.shape}")
    if c0.ndim != 1 or c0.shape[0] != h.shape[0]:
        raise ParameterError(f"state of shape {c0.shape} does not match Hamiltonian of shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ParameterError("Hamiltonian has non-finite entries")
    if not np.all(np.isfinite(c0)):
        raise ParameterError("initial state has non-finite entries")


def _time_grid(times: ArrayLike) -> NDArray[np.float64]:
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.ndim != 1 or t.size == 0:
        raise ParameterError("time grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(t)):
        raise ParameterError("time grid has non-finite entries")
    if t[0] < 0 or np.any(np.diff(t) < 0):
        raise ParameterError("time grid must be nonnegative and ascending")
    return t


def propagator_matrix(h: ArrayLike, t: float) -> NDArray[np.complex128]:
    """``exp(-i H t)`` by scaling and squaring."""
    return scipy.linalg.expm(-1j * t * np.asarray(h, dtype=complex))


def evolve_constant(
    h: ArrayLike,
    c0: ArrayLike,
    times: ArrayLike,
    *,
    labels: Sequence[str] | None = None,
    condition_limit: float = EIG_CONDITION_LIMIT,
) -> EvolutionResult:
    """Evolve ``c0`` under a time-independent H: ``c(t) = exp(-i H t) c0``.

    H is diagonalized as ``V diag(lambda) V^-1``. If the eigenvector matrix has
    a 2-norm condition number above ``condition_limit`` the eigenbasis is not
    trusted and each sample is computed with a scaling-and-squaring exponential.
    """
    h = np.asarray(h, dtype=complex)
    c0 = np.asarray(c0, dtype=complex)
    _validate(h, c0)
    t = _time_grid(times)

    evals, vecs = np.linalg.eig(h)
    cond = np.linalg.cond(vecs)
    if np.isfinite(cond) and cond <= condition_limit:
        coeffs = np.linalg.solve(vecs, c0)
        phases = np.exp(-1j * np.outer(t, evals))
        amps = (phases * coeffs) @ vecs.T
        method = "eig"
    else:
        amps = np.array([propagator_matrix(h, tk) @ c0 for tk in t])
        method = "expm"
    return EvolutionResult(t, amps, tuple(labels) if labels else None, method)


def evolve_timedep(
    h_of_t: Callable[[float], ArrayLike],
    c0: ArrayLike,
    t_span: tuple[float, float],
    *,
    times: ArrayLike | None = None,
    rtol: float = 1e-9,
    atol: float | None = None,
    labels: Sequence[str] | None = None,
) -> EvolutionResult:
    """Integrate ``i dC/dt = H(t) C`` over ``t_span`` with adaptive Dormand-Prince 8(5,3).

    Samples are produced at ``times`` (default: ``DEFAULT_SAMPLES`` points
    spanning ``t_span``) from the integrator's dense output. ``atol`` defaults
    to ``rtol * 1e-3``. Both are targets for the accumulated error, so the
    stepper is run with ``LOCAL_TOLERANCE_FACTOR`` times tighter settings.

    Raises:
        IntegrationError: the step size underflowed; ``t_fail`` is the last time reached.
    """
    c0 = np.asarray(c0, dtype=complex)
    t0, t1 = map(float, t_span)
    if not t1 > t0:
        raise ParameterError(f"t_span must be increasing, got {t_span!r}")
    h0 = np.asarray(h_of_t(t0), dtype=complex)
    _validate(h0, c0)
    if times is None:
        times = np.linspace(t0, t1, DEFAULT_SAMPLES)
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(np.diff(t) < 0) or t[0] < t0 or t[-1] > t1:
        raise ParameterError("sample times must be ascending and inside t_span")
    if atol is None:
        atol = rtol * 1e-3

    reached = [t0]

    def rhs(tt, y):
        reached[0] = tt
        return -1j * (np.asarray(h_of_t(tt), dtype=complex) @ y)

    with np.errstate(invalid="ignore", over="ignore"):
        sol = solve_ivp(
            rhs, (t0, t1), c0, method="DOP853", t_eval=t,
            rtol=rtol * LOCAL_TOLERANCE_FACTOR, atol=atol * LOCAL_TOLERANCE_FACTOR,
        )
    if sol.status != 0:
        t_fail = float(reached[0])
        raise IntegrationError(f"integration failed at t={t_fail:.12g}: {sol.message}", t_fail)
    return EvolutionResult(t, sol.y.T.copy(), tuple(labels) if labels else None, "DOP853")
