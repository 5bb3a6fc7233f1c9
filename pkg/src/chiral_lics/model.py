"""System parameters and effective Hamiltonians for LICS.

The continuum is assumed already eliminated: ionization rates, Stark shifts
and Fano parameters are inputs. All rates and frequencies are in units of
1/T, where T is an arbitrary reference time that never enters the numerics.

Conventions
-----------
- Bound-state ordering is ``g_1..g_ng, e_1..e_ne``.
- The chirality of the cyclic system is an explicit sign ``chirality_sign``
  multiplying the control coupling Omega_c; binding that sign to an L/R label
  is left to the caller (scenario files do this).
- The cross-coupling rate is always derived, ``gamma_ge = sqrt(gamma_g * gamma_e)``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import ParameterError

ComplexMatrix = NDArray[np.complex128]


def _check_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise ParameterError(f"{name} must be finite, got {value!r}")


def _check_rate(name, value):
    if value < 0:
        raise ParameterError(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class CyclicLicsParams:
    """Two bound states coupled through a common continuum plus a direct control field.

    Attributes:
        gamma_g, gamma_e: single-laser ionization rates of |g> and |e>.
        q: Fano parameter of the g-e two-photon coupling.
        s_g, s_e: Stark shifts.
        delta: two-photon detuning.
        omega_c: control Rabi frequency (real).
        chirality_sign: +1 or -1, multiplies ``omega_c``.
    """

    gamma_g: float
    gamma_e: float
    q: float
    s_g: float = 0.0
    s_e: float = 0.0
    delta: float = 0.0
    omega_c: float = 0.0
    chirality_sign: int = 1

    def __post_init__(self):
        _check_finite(
            gamma_g=self.gamma_g,
            gamma_e=self.gamma_e,
            q=self.q,
            s_g=self.s_g,
            s_e=self.s_e,
            delta=self.delta,
            omega_c=self.omega_c,
        )
        _check_rate("gamma_g", self.gamma_g)
        _check_rate("gamma_e", self.gamma_e)
        if self.chirality_sign not in (1, -1):
            raise ParameterError(f"chirality_sign must be +1 or -1, got {self.chirality_sign!r}")

    @property
    def gamma_ge(self) -> float:
        return math.sqrt(self.gamma_g * self.gamma_e)

    @property
    def delta_s(self) -> float:
        """Stark-shift difference S_g - S_e."""
        return self.s_g - self.s_e

    def replace(self, **changes) -> "CyclicLicsParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class MultiLicsParams:
    """Degenerate ground/excited manifolds coupled through a common continuum.

    Every ground state shares ``gamma_g`` and ``s_g``, every excited state
    shares ``gamma_e`` and ``s_e``. ``q_gg``, ``q_ee`` and ``q_ge`` are the
    Fano parameters of g-g, e-e and g-e continuum couplings.
    """

    gamma_g: float
    gamma_e: float
    q_gg: float
    q_ee: float
    q_ge: float
    s_g: float = 0.0
    s_e: float = 0.0
    delta: float = 0.0
    n_g: int = 5
    n_e: int = 5

    def __post_init__(self):
        _check_finite(
            gamma_g=self.gamma_g,
            gamma_e=self.gamma_e,
            q_gg=self.q_gg,
            q_ee=self.q_ee,
            q_ge=self.q_ge,
            s_g=self.s_g,
            s_e=self.s_e,
            delta=self.delta,
        )
        _check_rate("gamma_g", self.gamma_g)
        _check_rate("gamma_e", self.gamma_e)
        for name in ("n_g", "n_e"):
            n = getattr(self, name)
            if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
                raise ParameterError(f"{name} must be an integer >= 1, got {n!r}")

    @property
    def gamma_ge(self) -> float:
        return math.sqrt(self.gamma_g * self.gamma_e)

    @property
    def dim(self) -> int:
        return self.n_g + self.n_e

    def replace(self, **changes) -> "MultiLicsParams":
        return dataclasses.replace(self, **changes)


def basis_labels(n_g: int, n_e: int) -> tuple[str, ...]:
    """Labels ``('g1', ..., 'e1', ...)`` matching the amplitude ordering."""
    return tuple(f"g{i + 1}" for i in range(n_g)) + tuple(f"e{i + 1}" for i in range(n_e))


def build_cyclic_hamiltonian(p: CyclicLicsParams) -> ComplexMatrix:
    """2x2 effective Hamiltonian of the cyclic LICS system.

    ``H = 1/2 [[2 S_g - i G_g, s W_c - (q + i) G_ge],
               [s W_c - (q + i) G_ge, 2 D + 2 S_e - i G_e]]``

    with ``s`` the chirality sign. With ``omega_c = 0`` this is the plain
    two-level LICS Hamiltonian.
    """
    off = p.chirality_sign * p.omega_c - (p.q + 1j) * p.gamma_ge
    return 0.5 * np.array(
        [
            [2 * p.s_g - 1j * p.gamma_g, off],
            [off, 2 * p.delta + 2 * p.s_e - 1j * p.gamma_e],
        ],
        dtype=complex,
    )


def build_multilevel_hamiltonian(p: MultiLicsParams) -> ComplexMatrix:
    """(n_g + n_e)-square effective Hamiltonian of the degenerate multilevel system.

    Built as ``-1/2 [[D_g, W], [W^T, D_e]]`` where the ground block has
    ``-2 S_g + i G_g`` on the diagonal and ``(q_gg + i) G_g`` elsewhere, the
    excited block ``-2 S_e - 2 D + i G_e`` and ``(q_ee + i) G_e``, and every
    g-e element is ``(q_ge + i) G_ge``. The result is complex symmetric.
    """
    ng, ne = p.n_g, p.n_e
    dg = np.full((ng, ng), (p.q_gg + 1j) * p.gamma_g, dtype=complex)
    np.fill_diagonal(dg, -2 * p.s_g + 1j * p.gamma_g)
    de = np.full((ne, ne), (p.q_ee + 1j) * p.gamma_e, dtype=complex)
    np.fill_diagonal(de, -2 * p.s_e - 2 * p.delta + 1j * p.gamma_e)
    omega = np.full((ng, ne), (p.q_ge + 1j) * p.gamma_ge, dtype=complex)
    return -0.5 * np.block([[dg, omega], [omega.T, de]])


def decay_vector(p: CyclicLicsParams | MultiLicsParams) -> NDArray[np.float64]:
    """Square roots of the per-state ionization rates, ``(sqrt G_g, ..., sqrt G_e, ...)``.

    The anti-Hermitian part of every built Hamiltonian is ``-1/2 v v^T``.
    """
    if isinstance(p, CyclicLicsParams):
        ng = ne = 1
    else:
        ng, ne = p.n_g, p.n_e
    return np.concatenate([np.full(ng, math.sqrt(p.gamma_g)), np.full(ne, math.sqrt(p.gamma_e))])


def anti_hermitian_part(h: ComplexMatrix) -> ComplexMatrix:
    """``(H - H^dagger) / 2i``; Hermitian, negative semidefinite for a dissipative H."""
    return (h - h.conj().T) / 2j
