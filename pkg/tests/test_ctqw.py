import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm
from scipy.special import j0

from qwalklab.ctqw import cycle_generator, evolve_ct, line_distribution, line_generator
from qwalklab.observables import moments


def test_two_site_generator():
    assert line_generator(2, 1.5).matrix.tolist() == [[1.5, -1.5], [-1.5, 1.5]]


def test_five_site_line_rows():
    h = line_generator(5, 0.5).matrix
    assert h[2].tolist() == [0, -0.5, 1.0, -0.5, 0]
    assert h[0].tolist() == [0.5, -0.5, 0, 0, 0]


def test_four_cycle_circulant():
    h = cycle_generator(4, 1.0).matrix
    assert h[0].tolist() == [2, -1, 0, -1]
    assert np.array_equal(h[1], np.roll(h[0], 1))
    assert np.allclose(cycle_generator(4, 1.0).spectrum(), [0, 2, 2, 4], atol=1e-14)


def test_time_zero_is_identity():
    psi = np.array([0.6, 0.8j, 0, 0], dtype=complex)
    assert np.allclose(evolve_ct(psi, cycle_generator(4, 2.0), 0.0), psi, atol=1e-15)


def test_first_order_taylor():
    gen = line_generator(7, 1.0)
    psi = np.zeros(7, dtype=complex)
    psi[3] = 1
    dt = 1e-5
    approx = psi - 1j * dt * gen.matrix @ psi
    assert np.max(np.abs(evolve_ct(psi, gen, dt) - approx)) < 1e-9


def test_propagator_matches_expm():
    gen = cycle_generator(6, 0.7)
    assert np.allclose(gen.propagator(1.3), expm(-1j * 1.3 * gen.matrix), atol=1e-13)


def test_ballistic_variance():
    for gamma, t in ((1.0, 10.0), (0.5, 20.0)):
        var = moments(line_distribution(gamma, t)).variance
        assert var == pytest.approx(2 * gamma**2 * t**2, rel=1e-6)


def test_origin_probability_frozen():
    p0 = line_distribution(1.0, 5.0).at(0)
    assert p0 == pytest.approx(0.06048440023626878, abs=1e-12)
    assert p0 == pytest.approx(j0(10.0) ** 2, abs=1e-12)


def test_validation():
    with pytest.raises(ValueError):
        line_generator(1, 1.0)
    with pytest.raises(ValueError):
        cycle_generator(5, 0.0)
    with pytest.raises(ValueError):
        evolve_ct(np.ones(3), line_generator(4, 1.0), 1.0)
    with pytest.raises(ValueError):
        evolve_ct(np.ones(4), line_generator(4, 1.0), 1.0)
    with pytest.raises(ValueError):
        line_distribution(1.0, -1.0)


@given(st.integers(2, 12), st.floats(0.01, 5, allow_nan=False), st.floats(-10, 10, allow_nan=False), st.booleans())
def test_generator_hermitian_and_propagator_unitary(n, gamma, t, closed):
    gen = (cycle_generator if closed else line_generator)(n, gamma)
    assert np.array_equal(gen.matrix, gen.matrix.T)
    assert np.allclose(gen.matrix.sum(axis=1), 0, atol=1e-12)
    u = gen.propagator(t)
    assert np.allclose(u.conj().T @ u, np.eye(n), atol=1e-10)
    psi = np.zeros(n, dtype=complex)
    psi[0] = 1
    assert math.isclose(np.linalg.norm(evolve_ct(psi, gen, t)), 1.0, abs_tol=1e-10)
