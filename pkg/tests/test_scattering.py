#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""传递矩阵与定态散射"""

import numpy as np
import pytest

from utils.errors import SingularInputError
from utils.potential import CONSTANTS, PotentialProfile, wavenumber_from_energy
from utils.scattering import (
    scattering_amplitudes,
    stationary_wave,
    transfer_matrix,
    transmission_scan,
)


def _single_barrier_transmission(energy, height, width, mass_ratio):
    c2 = CONSTANTS.hbar2_over_2m(mass_ratio)
    if energy < height:
        kappa = np.sqrt((height - energy) / c2)
        return 1.0 / (1.0 + height ** 2 * np.sinh(kappa * width) ** 2 / (4.0 * energy * (height - energy)))
    q = np.sqrt((energy - height) / c2)
    return 1.0 / (1.0 + height ** 2 * np.sin(q * width) ** 2 / (4.0 * energy * (energy - height)))


def test_flux_conservation(canonical_profile):
    energies = np.linspace(1.0, 900.0, 2001)
    transmission, reflection = transmission_scan(canonical_profile, energies)
    np.testing.assert_allclose(transmission + reflection, 1.0, atol=1e-10)


def test_free_profile_is_transparent(free_profile):
    k = np.linspace(0.05, 2.0, 50)
    amplitudes = scattering_amplitudes(free_profile, k)
    np.testing.assert_allclose(amplitudes.t, 1.0, atol=1e-12)
    np.testing.assert_allclose(amplitudes.r, 0.0, atol=1e-12)


@pytest.mark.parametrize('energy', [20.0, 120.0, 229.0, 300.0, 700.0])
def test_single_barrier_matches_closed_form(energy):
    profile = PotentialProfile.from_pairs([(5.0, 230.0)], 0.067)
    transmission, _ = transmission_scan(profile, [energy])
    assert transmission[0] == pytest.approx(_single_barrier_transmission(energy, 230.0, 5.0, 0.067), rel=1e-9)


def test_time_reversal_symmetry(canonical_profile):
    k = np.linspace(0.1, 1.5, 30)
    forward = scattering_amplitudes(canonical_profile, k).t
    backward = scattering_amplitudes(canonical_profile, -k).t
    np.testing.assert_allclose(backward, np.conj(forward), rtol=1e-10)


def test_transfer_matrix_is_unimodular(canonical_profile):
    for k in (0.2, 0.363, 0.9):
        assert transfer_matrix(canonical_profile, k).determinant() == pytest.approx(1.0, abs=1e-9)


def _random_profile(rng) -> PotentialProfile:
    count = int(rng.integers(2, 6))
    pairs = [(rng.uniform(1.0, 4.0), rng.uniform(0.0, 200.0)) for _ in range(count)]
    return PotentialProfile.from_pairs(pairs, rng.uniform(0.05, 0.08))


def test_unitarity_on_asymmetric_profiles():
    rng = np.random.default_rng(3)
    for _ in range(40):
        profile = _random_profile(rng)
        transmission, reflection = transmission_scan(profile, rng.uniform(1.0, 600.0, 25))
        np.testing.assert_allclose(transmission + reflection, 1.0, atol=1e-12)


def test_reversed_profile_has_same_transmission():
    rng = np.random.default_rng(5)
    for _ in range(40):
        profile = _random_profile(rng)
        k = wavenumber_from_energy(rng.uniform(1.0, 600.0, 10), profile.mass_ratio)
        forward = scattering_amplitudes(profile, k)
        backward = scattering_amplitudes(profile.reversed(), k)
        np.testing.assert_allclose(backward.t, forward.t, rtol=1e-10)
        np.testing.assert_allclose(np.abs(backward.r), np.abs(forward.r), rtol=1e-9, atol=1e-13)


def test_determinant_within_rounding_bound_for_complex_k():
    rng = np.random.default_rng(7)
    for _ in range(60):
        profile = _random_profile(rng)
        k = rng.uniform(-10.0, 10.0, 20) + 1j * rng.uniform(-0.5, 0.0, 20)
        k = k[np.abs(k) <= 10.0]
        matrix = transfer_matrix(profile, k)
        error = np.abs(matrix.determinant() - 1.0)
        assert np.all(error <= np.maximum(1e-10, matrix.determinant_tolerance()))


def test_determinant_bound_is_tight_for_shallow_profiles():
    profile = PotentialProfile.from_pairs([(2.0, 20.0), (3.0, 0.0), (1.0, 40.0)], 0.067)
    k = np.linspace(0.6, 1.2, 40) - 0.01j
    matrix = transfer_matrix(profile, k)
    assert np.all(matrix.determinant_tolerance() < 1e-10)
    np.testing.assert_allclose(matrix.determinant(), 1.0, atol=1e-10)


def test_zero_wavenumber_is_singular(canonical_profile):
    with pytest.raises(SingularInputError):
        transfer_matrix(canonical_profile, 0.0)
    with pytest.raises(SingularInputError):
        scattering_amplitudes(canonical_profile, np.array([0.3, 0.0]))


def test_stationary_wave_matches_asymptotic_forms(canonical_profile):
    k = wavenumber_from_energy(74.97, 0.067)
    amplitudes = scattering_amplitudes(canonical_profile, k)
    length = canonical_profile.length

    at_edges = stationary_wave(canonical_profile, k, np.array([0.0, length]))
    assert at_edges[0] == pytest.approx(1.0 + amplitudes.r, abs=1e-12)
    assert at_edges[1] == pytest.approx(amplitudes.t * np.exp(1j * k * length), rel=1e-8)

    outside = stationary_wave(canonical_profile, k, np.array([-3.0, 20.0]))
    assert outside[0] == pytest.approx(np.exp(-3j * k) + amplitudes.r * np.exp(3j * k))
    assert outside[1] == pytest.approx(amplitudes.t * np.exp(20j * k))


def test_stationary_wave_is_continuous_across_interfaces(canonical_profile):
    k = wavenumber_from_energy(60.0, 0.067)
    for edge in canonical_profile.boundaries:
        values = stationary_wave(canonical_profile, k, np.array([edge - 1e-9, edge + 1e-9]))
        assert abs(values[1] - values[0]) < 1e-6 * max(1.0, abs(values[0]))
