"""Dark/bright block diagonalization of the degenerate multilevel Hamiltonian.

In a degenerate manifold every state couples to the continuum with the same
strength, so only the uniform superposition of each manifold (the *bright*
state) ionizes. Rotating into a basis ``(dark..., bright_g, bright_e)`` leaves

    W H W^dagger = [[H_dark, 0], [0, H_bright]]

with ``H_dark`` real diagonal and ``H_bright`` a 2x2 non-Hermitian block.

For five ground and five excited states the rotation is assembled from
nearest- and next-nearest-neighbour Givens rotations acting on both manifolds
at once (:func:`build_composite_rotation_5x5`). :func:`generic_rotation` builds
an equivalent transform for any ``(n_g, n_e)`` by Gram-Schmidt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ParameterError, StructuralError
from .model import CyclicLicsParams, MultiLicsParams, build_multilevel_hamiltonian

# row -> column of the final reordering; sends both bright states to the end
_SHIFT_5X5 = (0, 1, 2, 4, 7, 5, 6, 9, 3, 8)

ROTATION_ANGLES_5X5 = {
    "alpha1": math.pi / 2,
    "alpha2": math.pi / 4,
    "beta": -math.atan(1 / math.sqrt(2)),
    "alpha3": -math.pi / 3,
    "alpha4": 0.5 * math.atan(4 / 3),
}


def givens(n: int, i: int, j: int, angle: float) -> NDArray[np.float64]:
    """n x n identity with ``[[cos, sin], [-sin, cos]]`` placed on rows/columns ``i, j``."""
    g = np.eye(n)
    c, s = math.cos(angle), math.sin(angle)
    g[i, i] = c
    g[i, j] = s
    g[j, i] = -s
    g[j, j] = c
    return g


def sector_rotation(n_per_sector: int, i: int, j: int, angle: float) -> NDArray[np.float64]:
    """The same Givens rotation applied to ground states ``i, j`` and excited states ``i, j``."""
    n = 2 * n_per_sector
    return givens(n, i, j, angle) @ givens(n, n_per_sector + i, n_per_sector + j, angle)


def shift_matrix_5x5() -> NDArray[np.float64]:
    s = np.zeros((10, 10))
    s[np.arange(10), _SHIFT_5X5] = 1.0
    return s


def build_composite_rotation_5x5() -> NDArray[np.float64]:
    """10x10 orthogonal W = S U(a4) U(a3) U(b) U(a2) U(a1).

    Rows 0-3 are ground dark states, rows 4-7 excited dark states, rows 8 and
    9 the ground and excited bright states ``(1/sqrt 5) sum_i |g_i>`` and
    ``(1/sqrt 5) sum_i |e_i>``.
    """
    a = ROTATION_ANGLES_5X5
    u1 = sector_rotation(5, 0, 1, a["alpha1"])
    u2 = sector_rotation(5, 1, 2, a["alpha2"])
    ub = sector_rotation(5, 0, 2, a["beta"])
    u3 = sector_rotation(5, 2, 3, a["alpha3"])
    u4 = sector_rotation(5, 3, 4, a["alpha4"])
    return shift_matrix_5x5() @ u4 @ u3 @ ub @ u2 @ u1


def _sector_basis(n: int) -> NDArray[np.float64]:
    """Orthonormal rows: n-1 vectors orthogonal to the uniform vector, then the uniform vector.

    Modified Gram-Schmidt starting from the uniform vector and sweeping the
    fixed seed basis ``e_1, ..., e_n``; deterministic for a given n.
    """
    basis = [np.full(n, 1 / math.sqrt(n))]
    for k in range(n):
        v = np.zeros(n)
        v[k] = 1.0
        for b in basis:
            v -= (b @ v) * b
        norm = np.linalg.norm(v)
        if norm > 1e-10:
            basis.append(v / norm)
        if len(basis) == n:
            break
    return np.array(basis[1:] + basis[:1])


def generic_rotation(n_g: int, n_e: int) -> NDArray[np.float64]:
    """Orthogonal W for any degenerate ``(n_g, n_e)``, rows ordered (dark_g, dark_e, bright_g, bright_e)."""
    if n_g < 1 or n_e < 1:
        raise ParameterError(f"n_g and n_e must be >= 1, got ({n_g}, {n_e})")
    bg, be = _sector_basis(n_g), _sector_basis(n_e)
    n = n_g + n_e
    w = np.zeros((n, n))
    w[: n_g - 1, :n_g] = bg[:-1]
    w[n_g - 1 : n - 2, n_g:] = be[:-1]
    w[n - 2, :n_g] = bg[-1]
    w[n - 1, n_g:] = be[-1]
    return w


def dark_energies(p: MultiLicsParams) -> tuple[float, float]:
    """Real energies of the ground and excited dark states.

    ``eps_g = (2 S_g + G_g q_gg) / 2``, ``eps_e = (2 D + 2 S_e + G_e q_ee) / 2``.
    """
    eps_g = 0.5 * (2 * p.s_g + p.gamma_g * p.q_gg)
    eps_e = 0.5 * (2 * p.delta + 2 * p.s_e + p.gamma_e * p.q_ee)
    return eps_g, eps_e


@dataclass(frozen=True)
class DarkBrightDecomposition:
    w: NDArray
    transformed: NDArray[np.complex128]
    n_g: int
    n_e: int

    @property
    def h_bright(self) -> NDArray[np.complex128]:
        return self.transformed[-2:, -2:]

    @property
    def h_dark(self) -> NDArray[np.complex128]:
        return self.transformed[:-2, :-2]

    @property
    def dark_energies(self) -> NDArray[np.complex128]:
        return np.diag(self.h_dark).copy()

    @property
    def dark_states(self) -> NDArray:
        """Dark states as rows (kets are the conjugated rows of W)."""
        return self.w[:-2].conj()

    @property
    def bright_states(self) -> NDArray:
        return self.w[-2:].conj()

    @property
    def n_dark(self) -> int:
        return self.n_g + self.n_e - 2

    def off_block_leakage(self) -> float:
        """Largest magnitude outside the dark diagonal and the bright 2x2 block."""
        mask = np.ones(self.transformed.shape, dtype=bool)
        nd = self.n_dark
        mask[np.arange(nd), np.arange(nd)] = False
        mask[nd:, nd:] = False
        return float(np.max(np.abs(self.transformed[mask]), initial=0.0))

    def unitarity_error(self) -> float:
        return float(np.max(np.abs(self.w @ self.w.conj().T - np.eye(self.w.shape[0]))))


def decompose(
    h: ArrayLike,
    w: ArrayLike,
    *,
    n_g: int | None = None,
    n_e: int | None = None,
    params: MultiLicsParams | None = None,
    tol: float = 1e-9,
) -> DarkBrightDecomposition:
    """Rotate H by W and split into dark and bright parts.

    ``n_g``/``n_e`` default to ``params`` or an even split. With ``params``
    the dark energies are also checked against :func:`dark_energies`.

    Raises:
        StructuralError: leakage outside the expected blocks, or dark energies
            that disagree with the closed form, exceed ``tol``.
    """
    h = np.asarray(h, dtype=complex)
    w = np.asarray(w)
    if h.shape != w.shape or h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ParameterError(f"H {h.shape} and W {w.shape} must be square and the same size")
    n = h.shape[0]
    if params is not None:
        n_g = params.n_g if n_g is None else n_g
        n_e = params.n_e if n_e is None else n_e
    if n_g is None and n_e is None:
        if n % 2:
            raise ParameterError("n_g/n_e must be given for odd dimension")
        n_g = n_e = n // 2
    elif n_g is None:
        n_g = n - n_e
    elif n_e is None:
        n_e = n - n_g
    if n_g + n_e != n:
        raise ParameterError(f"n_g + n_e = {n_g + n_e} does not match dimension {n}")

    dec = DarkBrightDecomposition(w, w @ h @ w.conj().T, n_g, n_e)
    leak = dec.off_block_leakage()
    if leak > tol:
        raise StructuralError(f"off-block leakage {leak:.3e} exceeds {tol:.1e}; H is not degenerate or W is malformed")
    if params is not None:
        eps_g, eps_e = dark_energies(params)
        expected = np.array([eps_g] * (n_g - 1) + [eps_e] * (n_e - 1))
        err = float(np.max(np.abs(dec.dark_energies - expected), initial=0.0))
        if err > tol:
            raise StructuralError(f"dark energies deviate from the closed form by {err:.3e}")
    return dec


def generic_decomposition(p: MultiLicsParams) -> DarkBrightDecomposition:
    return decompose(build_multilevel_hamiltonian(p), generic_rotation(p.n_g, p.n_e), params=p)


def bright_builder(p: MultiLicsParams):
    """``delta -> H_bright`` of the decomposed multilevel Hamiltonian at that detuning."""
    w = generic_rotation(p.n_g, p.n_e)

    def build(delta):
        h = build_multilevel_hamiltonian(p.replace(delta=float(delta)))
        return (w @ h @ w.T)[-2:, -2:]

    return build


def bright_population(c0: ArrayLike, n_g: int = 5, n_e: int | None = None) -> float:
    """Population in the two bright states, ``|<b_g|c0>|^2 + |<b_e|c0>|^2``."""
    c0 = np.asarray(c0, dtype=complex)
    if n_e is None:
        n_e = c0.size - n_g
    if n_g + n_e != c0.size:
        raise ParameterError(f"state of length {c0.size} does not match n_g + n_e = {n_g + n_e}")
    pg = abs(np.sum(c0[:n_g])) ** 2 / n_g
    pe = abs(np.sum(c0[n_g:])) ** 2 / n_e if n_e else 0.0
    return float(pg + pe)


def enantiomer_state(name: str, n_g: int = 5, n_e: int = 5) -> NDArray[np.complex128]:
    """Named ground-manifold superpositions used to initialize the enantiomers.

    ``darkR = (g3 - g1)/sqrt 2`` is dark; ``brightL = (g3 + g1)/sqrt 2`` has
    bright-state overlap 2/n_g.
    """
    if n_g < 3:
        raise ParameterError(f"{name!r} needs at least 3 ground states, got n_g={n_g}")
    c = np.zeros(n_g + n_e, dtype=complex)
    if name == "darkR":
        c[0], c[2] = -1 / math.sqrt(2), 1 / math.sqrt(2)
    elif name == "brightL":
        c[0], c[2] = 1 / math.sqrt(2), 1 / math.sqrt(2)
    else:
        raise ParameterError(f"unknown named state {name!r}; expected 'darkR' or 'brightL'")
    return c


def bright_two_level_params(p: MultiLicsParams) -> CyclicLicsParams:
    """Two-level parameters whose Hamiltonian equals the bright block of ``p``.

    The bright states see rates ``n_g G_g`` and ``n_e G_e`` and Stark shifts
    lowered by the intra-manifold dispersive couplings ``(n - 1) q G / 2``.
    """
    return CyclicLicsParams(
        gamma_g=p.n_g * p.gamma_g,
        gamma_e=p.n_e * p.gamma_e,
        q=p.q_ge,
        s_g=p.s_g - 0.5 * (p.n_g - 1) * p.q_gg * p.gamma_g,
        s_e=p.s_e - 0.5 * (p.n_e - 1) * p.q_ee * p.gamma_e,
        delta=p.delta,
    )
