import math

import numpy as np
import pytest
from hypothesis import strategies as st

from chiral_lics.model import CyclicLicsParams, MultiLicsParams

ACCEPTANCE_LINES = []


@pytest.fixture
def fig3_l():
    """Cyclic system, L enantiomer (chirality +1, dS = 7)."""
    return CyclicLicsParams(gamma_g=0.5, gamma_e=2.24, q=4.0, s_g=7.0, s_e=0.0, omega_c=1.2, chirality_sign=1)


@pytest.fixture
def fig3_r():
    return CyclicLicsParams(gamma_g=0.5, gamma_e=2.24, q=4.0, s_g=2.0, s_e=0.0, omega_c=1.2, chirality_sign=-1)


@pytest.fixture
def fig4():
    return MultiLicsParams(
        gamma_g=1.7, gamma_e=1.9, q_gg=1.2, q_ee=2.4, q_ge=2.26, s_g=19.0, s_e=20.0, delta=-6.2, n_g=5, n_e=5
    )


rates = st.floats(min_value=0.0, max_value=3.0, allow_nan=False)
positive_rates = st.floats(min_value=0.05, max_value=3.0, allow_nan=False)
fano_q = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)
shifts = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


@st.composite
def cyclic_params(draw, gamma=rates):
    return CyclicLicsParams(
        gamma_g=draw(gamma),
        gamma_e=draw(gamma),
        q=draw(fano_q),
        s_g=draw(shifts),
        s_e=draw(shifts),
        delta=draw(shifts),
        omega_c=draw(st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)),
        chirality_sign=draw(st.sampled_from([1, -1])),
    )


@st.composite
def multi_params(draw, n_g=None, n_e=None):
    return MultiLicsParams(
        gamma_g=draw(rates),
        gamma_e=draw(rates),
        q_gg=draw(fano_q),
        q_ee=draw(fano_q),
        q_ge=draw(fano_q),
        s_g=draw(shifts),
        s_e=draw(shifts),
        delta=draw(shifts),
        n_g=n_g if n_g is not None else draw(st.integers(1, 6)),
        n_e=n_e if n_e is not None else draw(st.integers(1, 6)),
    )


def random_state(rng, n):
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    return c / np.linalg.norm(c)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
