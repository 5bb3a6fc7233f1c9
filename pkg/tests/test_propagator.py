import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chiral_lics.errors import IntegrationError, ParameterError
from chiral_lics.model import build_cyclic_hamiltonian, build_multilevel_hamiltonian
from chiral_lics.propagator import evolve_constant, evolve_timedep, ionization, propagator_matrix

from conftest import cyclic_params, multi_params, random_state
from oracles import expm_taylor, rk4_fixed


@pytest.mark.parametrize(
    "c, expected",
    [((1, 0), 0.0), ((1 / math.sqrt(2), 1j / math.sqrt(2)), 0.0), ((0.6, 0), 0.64)],
)
def test_ionization_values(c, expected):
    assert ionization(c) == pytest.approx(expected, abs=1e-15)


def test_zero_hamiltonian_is_identity():
    c0 = np.array([0.6, 0.8j])
    res = evolve_constant(np.zeros((2, 2)), c0, np.linspace(0, 10, 11))
    np.testing.assert_allclose(res.amplitudes, np.tile(c0, (11, 1)), atol=1e-15)
    np.testing.assert_allclose(res.ionization, 0, atol=1e-15)


def test_real_diagonal_is_phase_only():
    h = np.diag([1.3, -0.4, 2.0])
    c0 = np.array([0.6, 0.0, 0.8])
    res = evolve_constant(h, c0, np.linspace(0, 7, 50))
    np.testing.assert_allclose(np.abs(res.amplitudes), np.tile(np.abs(c0), (50, 1)), atol=1e-14)
    np.testing.assert_allclose(res.ionization, 0, atol=1e-14)


def test_fig3_trapped_branch_ionizes_less_against_rk4_oracle(fig3_l):
    # Delta = 4.506 traps the chirality +1, dS = 7 branch; the opposite sign does not
    trapped = build_cyclic_hamiltonian(fig3_l.replace(delta=4.506))
    untrapped = build_cyclic_hamiltonian(fig3_l.replace(delta=4.506, chirality_sign=-1))
    c0 = [1, 0]
    i_trapped = evolve_constant(trapped, c0, [5.0]).ionization[0]
    i_untrapped = evolve_constant(untrapped, c0, [5.0]).ionization[0]
    assert i_trapped < i_untrapped
    assert i_trapped == pytest.approx(ionization(rk4_fixed(trapped, c0, 5.0)), abs=1e-10)
    assert i_untrapped == pytest.approx(ionization(rk4_fixed(untrapped, c0, 5.0)), abs=1e-10)


def test_fallback_on_defective_matrix():
    # Jordan block: eigenvectors are parallel, so the eigenbasis is rejected
    h = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    res = evolve_constant(h, [0, 1], [0.0, 0.5, 2.0])
    assert res.method == "expm"
    for t, c in zip(res.times, res.amplitudes):
        np.testing.assert_allclose(c, expm_taylor(-1j * h * t) @ [0, 1], atol=1e-13)


def test_eig_route_matches_taylor_oracle(fig4):
    h = build_multilevel_hamiltonian(fig4)
    c0 = random_state(np.random.default_rng(1), 10)
    res = evolve_constant(h, c0, [0.0, 0.3, 2.5])
    assert res.method == "eig"
    for t, c in zip(res.times, res.amplitudes):
        np.testing.assert_allclose(c, expm_taylor(-1j * h * t) @ c0, atol=1e-11)


def test_propagator_matrix_matches_taylor_oracle(fig3_l):
    h = build_cyclic_hamiltonian(fig3_l)
    np.testing.assert_allclose(propagator_matrix(h, 1.7), expm_taylor(-1j * h * 1.7), atol=1e-12)


@pytest.mark.parametrize(
    "h, c0, times",
    [
        (np.zeros((2, 3)), [1, 0], [0, 1]),
        (np.eye(2), [1, 0, 0], [0, 1]),
        (np.array([[np.nan, 0], [0, 1]]), [1, 0], [0, 1]),
        (np.eye(2), [1, 0], [1, 0]),
        (np.eye(2), [1, 0], [-1, 0]),
    ],
)
def test_evolve_constant_rejects_bad_input(h, c0, times):
    with pytest.raises(ParameterError):
        evolve_constant(h, c0, times)


def test_timedep_constant_matches_constant(fig4):
    h = build_multilevel_hamiltonian(fig4)
    c0 = random_state(np.random.default_rng(7), 10)
    times = np.linspace(0, 4, 41)
    a = evolve_constant(h, c0, times).amplitudes
    b = evolve_timedep(lambda t: h, c0, (0, 4), times=times).amplitudes
    assert np.max(np.abs(a - b)) < 1e-8


def test_timedep_hermitian_conserves_norm():
    def h(t):
        return np.array([[0.0, 3 * math.cos(t)], [3 * math.cos(t), 1.5 * math.sin(2 * t)]], dtype=complex)

    res = evolve_timedep(h, [1, 0], (0, 20))
    assert np.max(np.abs(res.ionization)) < 1e-9


def test_timedep_default_grid():
    res = evolve_timedep(lambda t: np.eye(2), [1, 0], (0, 1))
    assert res.times.size == 500
    assert res.amplitudes[-1, 0] == pytest.approx(np.exp(-1j), abs=1e-10)


def test_timedep_reports_failure_time():
    # H stops being finite after t = 0.5; steps shrink until they underflow there
    def h(t):
        return np.array([[math.nan if t > 0.5 else 1.0]], dtype=complex)

    with pytest.raises(IntegrationError) as err:
        evolve_timedep(h, [1.0], (0, 2))
    assert err.value.t_fail == pytest.approx(0.5, abs=1e-9)
    assert "t=" in str(err.value)


@settings(max_examples=40, deadline=None)
@given(cyclic_params(), st.floats(0.0, 5.0), st.floats(0.0, 5.0))
def test_semigroup(p, t1, t2):
    h = build_cyclic_hamiltonian(p)
    c0 = np.array([1, 0], dtype=complex)
    mid = evolve_constant(h, c0, [t1]).amplitudes[0]
    two_step = evolve_constant(h, mid, [t2]).amplitudes[0]
    direct = evolve_constant(h, c0, [t1 + t2]).amplitudes[0]
    assert np.max(np.abs(two_step - direct)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(multi_params(n_g=3, n_e=2))
def test_ionization_is_monotone(p):
    h = build_multilevel_hamiltonian(p)
    c0 = random_state(np.random.default_rng(0), 5)
    ion = evolve_constant(h, c0, np.linspace(0, 10, 200)).ionization
    assert np.all(np.diff(ion) >= -1e-9)
    assert ion[0] == pytest.approx(0, abs=1e-12)
