"""Trapping detunings and Fano ionization profiles.

A detuning is *trapping* when the effective Hamiltonian acquires a real
eigenvalue, so the corresponding mode never ionizes. Closed forms exist for
the two-level and cyclic systems; :func:`trapping_detuning_numeric` finds the
same point for any small Hamiltonian family by minimizing ``min_i |Im lambda_i|``.

Sign bookkeeping for the cyclic system: a Hamiltonian built with chirality
sign ``s`` traps at :func:`trapping_detuning_cyclic` with ``branch_sign = -s``
(see :func:`trapping_branch`).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize_scalar

from .errors import ParameterError, TrapNotFoundError
from .model import CyclicLicsParams, MultiLicsParams, build_cyclic_hamiltonian, build_multilevel_hamiltonian
from .propagator import evolve_constant, ionization

HamiltonianBuilder = Callable[[float], NDArray[np.complex128]]

def trapping_detuning_two_level(p: CyclicLicsParams) -> float:
    """Closed-form trapping detuning of the two-level system (control field off).

    ``Delta = q (G_g - G_e) / 2 + S_g - S_e``
    """
    if p.gamma_g + p.gamma_e <= 0:
        raise ParameterError("trapping needs gamma_g + gamma_e > 0")
    return 0.5 * p.q * (p.gamma_g - p.gamma_e) + p.delta_s


def trapping_detuning_cyclic(p: CyclicLicsParams, branch_sign: int) -> float:
    """Closed-form trapping detuning of the cyclic system for one sign branch.

    ``Delta = dS - (G_e - G_g)(q G_e G_g + b W_c G_ge) / (2 G_e G_g)``

    ``p.chirality_sign`` is ignored; the branch is chosen by ``branch_sign``.
    """
    if branch_sign not in (1, -1):
        raise ParameterError(f"branch_sign must be +1 or -1, got {branch_sign!r}")
    for name in ("gamma_g", "gamma_e"):
        if getattr(p, name) == 0:
            raise ZeroDivisionError(f"cyclic trapping detuning is undefined for {name} = 0")
    gg, ge = p.gamma_g, p.gamma_e
    return p.delta_s - (ge - gg) * (p.q * ge * gg + branch_sign * p.omega_c * p.gamma_ge) / (2 * ge * gg)


def trapping_branch(chirality_sign: int) -> int:
    """Branch of :func:`trapping_detuning_cyclic` that traps a Hamiltonian of the given chirality."""
    return -chirality_sign


def min_abs_imag_eigenvalue(h: ArrayLike) -> float:
    """``min_i |Im lambda_i(H)|``; zero exactly when H has a real eigenvalue."""
    return float(np.min(np.abs(np.linalg.eigvals(np.asarray(h, dtype=complex)).imag)))


@dataclass(frozen=True)
class TrapResult:
    delta: float
    residual: float
    trace: list[tuple[float, float]] = field(default_factory=list, repr=False)


def _least_damped_imag(h) -> float:
    evals = np.linalg.eigvals(np.asarray(h, dtype=complex))
    return float(evals.imag[np.argmin(np.abs(evals.imag))])


def _parabolic_polish(signed, f, x, fx, steps=(1e-3, 1e-4, 1e-5)):
    # |Im lambda| has a flat quadratic floor near the trap; the signed
    # Im lambda of the least-damped mode is smooth and locates it better.
    for h in steps:
        ql, qc, qr = signed(x - h), signed(x), signed(x + h)
        curv = ql - 2 * qc + qr
        if curv == 0:
            break
        xn = x + 0.5 * h * (ql - qr) / curv
        if abs(xn - x) > 2 * h:
            continue
        fn = f(xn)
        if fn <= max(fx, 1e-14):
            x, fx = xn, fn
    return x, fx


def trapping_detuning_numeric(
    builder: HamiltonianBuilder,
    bracket: tuple[float, float],
    *,
    n_scan: int = 201,
    xtol: float = 1e-11,
    found_tol: float = 1e-8,
) -> TrapResult:
    """Locate the detuning in ``bracket`` where ``builder(delta)`` has a real eigenvalue.

    A uniform scan of ``min|Im lambda|`` picks the best basin, bounded Brent
    minimization (golden-section with parabolic steps) narrows it, and parabolic steps on the signed imaginary part of
    the least-damped eigenvalue polish the result.

    Raises:
        TrapNotFoundError: the best point has ``min|Im lambda| > found_tol``;
            the scanned ``(delta, value)`` pairs are attached as ``trace``.
    """
    lo, hi = map(float, bracket)
    if not hi > lo:
        raise ParameterError(f"bracket must satisfy lo < hi, got {bracket!r}")
    if n_scan < 3:
        raise ParameterError("n_scan must be >= 3")

    def f(x):
        return min_abs_imag_eigenvalue(builder(x))

    grid = np.linspace(lo, hi, n_scan)
    values = np.array([f(x) for x in grid])
    trace = list(zip(grid.tolist(), values.tolist()))
    k = int(np.argmin(values))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, n_scan - 1)]
    if b > a:
        opt = minimize_scalar(f, bounds=(a, b), method="bounded", options={"xatol": xtol, "maxiter": 500})
        x, fx = float(opt.x), float(opt.fun)
    else:
        x, fx = float(grid[k]), float(values[k])
    x, fx = _parabolic_polish(lambda d: _least_damped_imag(builder(d)), f, x, fx)
    if values[k] < fx:
        x, fx = float(grid[k]), float(values[k])
    if not fx <= found_tol:
        raise TrapNotFoundError(
            f"no real eigenvalue in [{lo:g}, {hi:g}]: best min|Im lambda| = {fx:.3e} at delta = {x:.9g}",
            trace,
        )
    return TrapResult(float(x), float(fx), trace)


@dataclass(frozen=True)
class FanoProfile:
    """Ionization at a fixed probe time as a function of the two-photon detuning.

    ``minima`` holds ``(delta, ionization)`` pairs refined by a three-point
    parabola; ``failures`` maps grid indices to error messages.
    """

    deltas: NDArray[np.float64]
    ionization: NDArray[np.float64]
    t_probe: float
    minima: list[tuple[float, float]]
    failures: dict[int, str] = field(default_factory=dict)

    @property
    def global_minimum(self) -> tuple[float, float]:
        if not self.minima:
            raise ValueError("profile has no finite samples")
        return min(self.minima, key=lambda m: m[1])

    @property
    def grid_step(self) -> float:
        return float(self.deltas[1] - self.deltas[0]) if self.deltas.size > 1 else 0.0


def _refine_minima(x: NDArray, y: NDArray) -> list[tuple[float, float]]:
    minima = []
    for k in range(1, len(x) - 1):
        yl, yc, yr = y[k - 1], y[k], y[k + 1]
        if not (np.isfinite(yl) and np.isfinite(yc) and np.isfinite(yr)):
            continue
        if yc < yl and yc <= yr:
            h = x[k + 1] - x[k]
            curv = yl - 2 * yc + yr
            if curv > 0:
                shift = 0.5 * (yl - yr) / curv
                xm = x[k] + shift * h
                ym = yc - 0.125 * (yl - yr) ** 2 / curv
            else:
                xm, ym = x[k], yc
            minima.append((float(xm), float(ym)))
    if not minima:
        finite = np.flatnonzero(np.isfinite(y))
        if finite.size:
            k = finite[np.argmin(y[finite])]
            minima.append((float(x[k]), float(y[k])))
    return minima


def _probe(builder, c0, t_probe, delta):
    amps = evolve_constant(builder(delta), c0, [t_probe]).amplitudes[0]
    return ionization(amps)


def fano_scan(
    builder: HamiltonianBuilder,
    deltas: Sequence[float] | NDArray,
    t_probe: float,
    c0: ArrayLike,
    *,
    threads: int = 1,
) -> FanoProfile:
    """Ionization at ``t_probe`` for every detuning in ``deltas``, plus refined local minima.

    Grid points are independent and may be spread over ``threads`` workers;
    results are always returned in grid order. A failing grid point is
    recorded in ``failures`` and its ionization set to NaN.
    """
    deltas = np.asarray(deltas, dtype=float)
    if deltas.ndim != 1 or deltas.size == 0:
        raise ParameterError("deltas must be a non-empty 1-D grid")
    if np.any(np.diff(deltas) <= 0):
        raise ParameterError("deltas must be strictly ascending")
    c0 = np.asarray(c0, dtype=complex)
    failures: dict[int, str] = {}

    def point(k):
        try:
            return _probe(builder, c0, t_probe, deltas[k])
        except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            failures[k] = f"{type(exc).__name__}: {exc}"
            return math.nan

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(point, range(deltas.size)))
    else:
        values = [point(k) for k in range(deltas.size)]
    values = np.array(values, dtype=float)
    return FanoProfile(deltas, values, float(t_probe), _refine_minima(deltas, values), dict(sorted(failures.items())))


def cyclic_builder(p: CyclicLicsParams) -> HamiltonianBuilder:
    """``delta -> build_cyclic_hamiltonian(p with delta)``."""
    return lambda delta: build_cyclic_hamiltonian(p.replace(delta=float(delta)))


def multilevel_builder(p: MultiLicsParams) -> HamiltonianBuilder:
    return lambda delta: build_multilevel_hamiltonian(p.replace(delta=float(delta)))
