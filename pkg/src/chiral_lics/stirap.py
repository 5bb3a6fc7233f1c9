"""Enantiomer-selective superposition preparation by cyclic three-wave STIRAP.

States 1, 2, 3 are coupled pairwise by a pump (1-2), Stokes (2-3) and control
(1-3) field; the control coupling carries the chirality sign. Rotating states
2 and 3 by the mixing angle ``theta`` (``tan theta = sigma W_C / W_P``) turns
the loop into a Lambda chain 1 - 2' - 3'. With counterintuitive ordering the
population is carried adiabatically from state 1 into ``3'``, which is a
sign-dependent superposition of states 2 and 3.

Pulse envelopes are Gaussians, ``peak * exp(-((t - center) / width)^2)``.
The mixing angle is kept constant (control proportional to pump) so there is
no nonadiabatic ``d theta/dt`` coupling.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from numpy.typing import NDArray

from .errors import AdiabaticityWarning, ParameterError
from .propagator import EvolutionResult, evolve_timedep

Envelope = Callable[[float], float]


@dataclass(frozen=True)
class PulseSpec:
    peak: float
    center: float
    width: float
    shape: str = "gaussian"

    def __post_init__(self):
        if not self.width > 0:
            raise ParameterError(f"pulse width must be > 0, got {self.width!r}")
        if self.peak < 0:
            raise ParameterError(f"pulse peak must be >= 0, got {self.peak!r}")
        if self.shape != "gaussian":
            raise ParameterError(f"unsupported pulse shape {self.shape!r}")

    def __call__(self, t: float) -> float:
        return self.peak * math.exp(-(((t - self.center) / self.width) ** 2))

    @property
    def area(self) -> float:
        return self.peak * self.width * math.sqrt(math.pi)


def _zero(t: float) -> float:
    return 0.0


@dataclass(frozen=True)
class ThreeWaveParams:
    """Envelopes, phases and detunings of the cyclic three-level system.

    ``delta_2`` and ``delta_3`` shift states 2 and 3 respectively.
    """

    pump: Envelope = _zero
    stokes: Envelope = _zero
    control: Envelope = _zero
    phi_p: float = 0.0
    phi_s: float = 0.0
    delta_2: float = 0.0
    delta_3: float = 0.0
    chirality_sign: int = 1

    def __post_init__(self):
        if self.chirality_sign not in (1, -1):
            raise ParameterError(f"chirality_sign must be +1 or -1, got {self.chirality_sign!r}")


def build_three_wave_hamiltonian(p: ThreeWaveParams, t: float) -> NDArray[np.complex128]:
    """Hermitian 3x3 Hamiltonian of the cyclic system at time ``t``."""
    wp, ws, wc = p.pump(t), p.stokes(t), p.chirality_sign * p.control(t)
    ep, es = np.exp(1j * p.phi_p), np.exp(1j * p.phi_s)
    return 0.5 * np.array(
        [
            [0.0, wp * ep, wc],
            [wp * np.conj(ep), 2 * p.delta_2, ws * es],
            [wc, ws * np.conj(es), 2 * p.delta_3],
        ],
        dtype=complex,
    )


def m_transform(theta: float, phi_p: float) -> NDArray[np.complex128]:
    """Unitary mixing of states 2 and 3; amplitudes transform as ``c' = M c``."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, c, np.exp(-1j * phi_p) * s],
            [0.0, np.exp(1j * phi_p) * s, -c],
        ],
        dtype=complex,
    )


def mixing_angle(p: ThreeWaveParams, t: float) -> float:
    wp, wc = p.pump(t), p.chirality_sign * p.control(t)
    if wp == 0 and wc == 0:
        raise ParameterError(f"mixing angle undefined at t={t}: pump and control both vanish")
    return math.atan2(wc, wp)


class EffectiveParameters(NamedTuple):
    omega_p: complex
    omega_s: complex
    delta_2: float
    delta_3: float


def effective_parameters(p: ThreeWaveParams, t: float) -> EffectiveParameters:
    """Couplings and detunings of the rotated Lambda chain at time ``t``.

    The rotated pump has modulus ``sqrt(W_P^2 + W_C^2)``; the rotated Stokes
    and detunings pick up cross terms in ``cos(phi_p + phi_s)``. The cross
    term enters the two detunings with opposite signs, as the trace of the
    rotated Hamiltonian requires.
    """
    wp, ws, wc = p.pump(t), p.stokes(t), p.chirality_sign * p.control(t)
    omega_sq = wp**2 + wc**2
    if omega_sq == 0:
        raise ParameterError(f"mixing angle undefined at t={t}: pump and control both vanish")
    d2, d3 = p.delta_2, p.delta_3
    phase_sum = p.phi_p + p.phi_s
    omega_p = np.exp(1j * p.phi_p) * math.sqrt(omega_sq)
    omega_s = (
        2 * np.exp(-1j * p.phi_p) * (d2 - d3) * wp * wc
        + (np.exp(-2j * phase_sum) * wc**2 - wp**2) * np.exp(1j * p.phi_s) * ws
    ) / omega_sq
    cross = wp * ws * wc * math.cos(phase_sum)
    delta_2 = (d3 * wc**2 + d2 * wp**2 + cross) / omega_sq
    delta_3 = (d2 * wc**2 + d3 * wp**2 - cross) / omega_sq
    return EffectiveParameters(complex(omega_p), complex(omega_s), float(delta_2), float(delta_3))


def target_state(theta: float, phi_p: float) -> NDArray[np.complex128]:
    """State whose amplitude is the third rotated component, ``sin(theta) e^{-i phi_p}|2> - cos(theta)|3>``."""
    return m_transform(theta, phi_p)[2].conj()


@dataclass(frozen=True)
class StirapPulses:
    """Stokes pulse and the pump pulse; the control pulse copies the pump."""

    stokes: PulseSpec = field(default_factory=lambda: PulseSpec(peak=20.0, center=-1.0, width=2.0))
    pump: PulseSpec = field(default_factory=lambda: PulseSpec(peak=20.0, center=1.0, width=2.0))

    @property
    def t_span(self) -> tuple[float, float]:
        lo = min(self.stokes.center - 5 * self.stokes.width, self.pump.center - 5 * self.pump.width)
        hi = max(self.stokes.center + 5 * self.stokes.width, self.pump.center + 5 * self.pump.width)
        return lo, hi


@dataclass(frozen=True)
class StirapResult:
    final_state: NDArray[np.complex128]
    target: NDArray[np.complex128]
    fidelity: float
    evolution: EvolutionResult
    params: ThreeWaveParams


def prepare_superposition(
    chirality_sign: int,
    pulses: StirapPulses | None = None,
    *,
    phi_p: float = 0.0,
    rtol: float = 1e-9,
    n_samples: int = 500,
) -> StirapResult:
    """Transfer state 1 into the chirality-dependent superposition of states 2 and 3.

    Control equals pump in shape and size (``theta = sign * pi/4``), both
    detunings vanish and ``phi_s = pi/2 - phi_p``, which keeps the rotated
    state 3 on resonance. With ``phi_p = 0`` the targets are
    ``(|2> - sign |3>)/sqrt 2``.

    Warns:
        AdiabaticityWarning: fidelity below 0.9.
    """
    pulses = pulses or StirapPulses()
    if pulses.stokes.center >= pulses.pump.center:
        raise ParameterError("counterintuitive ordering required: the Stokes pulse must precede the pump")
    params = ThreeWaveParams(
        pump=pulses.pump,
        stokes=pulses.stokes,
        control=pulses.pump,
        phi_p=phi_p,
        phi_s=math.pi / 2 - phi_p,
        chirality_sign=chirality_sign,
    )
    t0, t1 = pulses.t_span
    evo = evolve_timedep(
        lambda t: build_three_wave_hamiltonian(params, t),
        np.array([1.0, 0.0, 0.0], dtype=complex),
        (t0, t1),
        times=np.linspace(t0, t1, n_samples),
        rtol=rtol,
        labels=("psi1", "psi2", "psi3"),
    )
    target = target_state(chirality_sign * math.pi / 4, phi_p)
    final = evo.final_state
    fidelity = float(abs(np.vdot(target, final)) ** 2)
    if fidelity < 0.9:
        warnings.warn(f"STIRAP fidelity {fidelity:.3f} < 0.9; pulses are not adiabatic", AdiabaticityWarning, stacklevel=2)
    return StirapResult(final, target, fidelity, evo, params)
