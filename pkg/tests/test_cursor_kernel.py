import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feyncursor.core.cursor_kernel import (
    amplitude,
    amplitude_ode,
    amplitudes,
    bond_couplings,
    build_spectrum,
    group_velocity,
    integrate_amplitudes,
    position_distribution,
    position_variance,
)


def test_single_site_spectrum():
    spec = build_spectrum(1, 1.0)
    np.testing.assert_allclose(spec.angles, [math.pi / 2])
    np.testing.assert_allclose(spec.energies, [0.0], atol=1e-15)
    np.testing.assert_allclose(spec.modes, [[1.0]])


def test_three_site_energies():
    spec = build_spectrum(3, 1.0)
    h = math.sqrt(2) / 2
    np.testing.assert_allclose(spec.energies, [-h, 0.0, h], atol=1e-15)


def test_modes_are_orthonormal(spec129):
    assert abs(np.sum(spec129.modes[4] ** 2) - 1) < 1e-12
    gram = spec129.modes @ spec129.modes.T
    np.testing.assert_allclose(gram, np.eye(129), atol=1e-12)


@pytest.mark.parametrize("bad", [0, -1, 2.5, True])
def test_build_spectrum_rejects_bad_site_count(bad):
    with pytest.raises(ValueError):
        build_spectrum(bad)


def test_build_spectrum_rejects_non_constant_coupling():
    with pytest.raises(ValueError, match="amplitude_ode"):
        build_spectrum(4, [1.0, 1.0, 2.0, 1.0])
    with pytest.raises(ValueError):
        build_spectrum(4, -1.0)


def test_initial_condition(spec129):
    values = amplitude(spec129, 0.0).values
    expected = np.zeros(129)
    expected[0] = 1.0
    np.testing.assert_allclose(values, expected, atol=1e-12)


def test_two_site_rabi_oscillation():
    spec = build_spectrum(2, 1.0)
    times = np.linspace(0, 10, 41)
    c = amplitudes(spec, times)
    np.testing.assert_allclose(c[:, 0], np.cos(times / 2), atol=1e-12)
    np.testing.assert_allclose(c[:, 1], 1j * np.sin(times / 2), atol=1e-12)

    p = position_distribution(amplitude(spec, math.pi))
    np.testing.assert_allclose(p, [0.0, 1.0], atol=1e-12)


def test_two_site_ode_half_transfer():
    p = position_distribution(amplitude_ode(2, 1.0, math.pi / 2))
    np.testing.assert_allclose(p, [0.5, 0.5], atol=1e-10)


def test_spectral_sum_matches_hamiltonian_exponential():
    s, t = 7, 3.3
    h = np.diag(np.full(s - 1, -0.5), 1) + np.diag(np.full(s - 1, -0.5), -1)
    w, v = np.linalg.eigh(h)
    expected = v @ (np.exp(-1j * w * t) * v[0].conj())
    np.testing.assert_allclose(amplitude(build_spectrum(s), t).values, expected, atol=1e-12)


def test_closed_form_matches_ode_over_two_traversals(spec129):
    times = np.arange(0, 2 * 129 + 1e-9, 0.5)
    closed = amplitudes(spec129, times)
    ode = integrate_amplitudes(129, 1.0, times)
    assert np.max(np.abs(closed - ode)) < 1e-8
    assert np.max(np.abs(np.linalg.norm(ode, axis=1) - 1)) < 1e-9


def test_ode_samples_unsorted_times():
    times = [3.0, 0.0, 1.25]
    ode = integrate_amplitudes(9, 1.0, times)
    closed = amplitudes(build_spectrum(9), times)
    np.testing.assert_allclose(ode, closed, atol=1e-9)


def test_ode_step_bound():
    with pytest.raises(ValueError, match="dt"):
        amplitude_ode(5, 1.0, 1.0, dt=0.5)
    with pytest.raises(ValueError, match="dt"):
        amplitude_ode(5, 4.0, 1.0, dt=0.005)


def test_ode_integrates_backwards_in_time():
    spec = build_spectrum(5)
    back = amplitude_ode(5, 1.0, -1.0)
    np.testing.assert_allclose(back.values, amplitude(spec, -1.0).values, atol=1e-9)
    np.testing.assert_allclose(back.values, np.conj(amplitude_ode(5, 1.0, 1.0).values), atol=1e-9)


def test_ode_samples_both_time_directions():
    times = [-2.0, 0.0, 3.0, -0.5]
    ode = integrate_amplitudes(9, 1.0, times)
    np.testing.assert_allclose(ode, amplitudes(build_spectrum(9), times), atol=1e-9)
    np.testing.assert_allclose(ode[1], np.eye(9)[0], atol=1e-15)


def test_bond_couplings_forms():
    np.testing.assert_allclose(bond_couplings(4, 2.0), [2.0, 2.0, 2.0])
    np.testing.assert_allclose(bond_couplings(4, [1.0, 2.0, 3.0]), [1.0, 2.0, 3.0])
    np.testing.assert_allclose(bond_couplings(4, [1.0, 2.0, 3.0, 4.0]), [1.5, 2.5, 3.5])
    with pytest.raises(ValueError):
        bond_couplings(4, [1.0, 2.0])
    with pytest.raises(ValueError):
        bond_couplings(4, [1.0, 0.0, 1.0])


def test_site_dependent_coupling_keeps_norm():
    coupling = 1.0 + 0.5 * np.sin(np.arange(20))
    ode = integrate_amplitudes(20, coupling, [0.0, 5.0, 10.0], dt=0.005)
    np.testing.assert_allclose(np.linalg.norm(ode, axis=1), 1.0, atol=1e-9)


def test_uniform_site_profile_reduces_to_constant():
    ode = amplitude_ode(10, np.full(10, 1.0), 4.0).values
    np.testing.assert_allclose(ode, amplitude(build_spectrum(10), 4.0).values, atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(t=st.floats(min_value=0.0, max_value=258.0, allow_nan=False))
def test_unitarity(spec129, t):
    assert abs(amplitude(spec129, t).norm() - 1) < 1e-12


@settings(max_examples=30, deadline=None)
@given(t=st.floats(min_value=0.0, max_value=100.0, allow_nan=False),
       s=st.integers(min_value=1, max_value=40))
def test_time_reversal(t, s):
    spec = build_spectrum(s)
    forward, backward = amplitudes(spec, [t, -t])
    np.testing.assert_allclose(backward, forward.conj(), atol=1e-12)


def test_ballistic_front(spec129):
    p = position_distribution(amplitude(spec129, 60.0))
    assert np.all(p >= 0)
    peak = int(np.argmax(p)) + 1
    assert 48 <= peak <= 62
    assert np.sum(p[72:]) < 1e-4


def test_variance_spreading_is_quadratic(spec129):
    assert position_variance(amplitude(spec129, 0.0)) == pytest.approx(0.0, abs=1e-12)
    times = np.linspace(0, 10, 101)
    var = np.array([position_variance(amplitude(spec129, t)) for t in times])
    fit = np.polyval(np.polyfit(times, var, 2), times)
    r2 = 1 - np.sum((var - fit) ** 2) / np.sum((var - var.mean()) ** 2)
    assert r2 > 0.99


def test_variance_support_bound():
    spec = build_spectrum(9)
    for t in np.linspace(0, 40, 81):
        assert position_variance(amplitude(spec, t)) <= (9 - 1) ** 2 / 4


def test_group_velocity_is_band_slope():
    spec = build_spectrum(16, 2.0)
    v = group_velocity(spec)
    assert np.all(v > 0)
    assert np.max(v) <= 2.0
    np.testing.assert_allclose(v, 2.0 * np.sin(spec.angles))
