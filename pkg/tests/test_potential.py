#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""势与单位换算"""

import numpy as np
import pytest

from utils.errors import InvalidParameterError, PhysicalDomainError
from utils.potential import (
    CONSTANTS,
    PotentialProfile,
    build_double_barrier,
    classical_speed,
    energy_from_wavenumber,
    wavenumber_from_energy,
)


def test_double_barrier_geometry(canonical_profile):
    assert canonical_profile.length == pytest.approx(15.0)
    np.testing.assert_allclose(canonical_profile.boundaries, [0.0, 5.0, 10.0, 15.0])
    np.testing.assert_allclose(canonical_profile.heights, [230.0, 0.0, 230.0])
    assert not canonical_profile.is_free


def test_potential_at_averages_on_interfaces(canonical_profile):
    x = np.array([-1.0, 0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 20.0])
    expected = [0.0, 115.0, 230.0, 115.0, 0.0, 115.0, 230.0, 115.0, 0.0]
    np.testing.assert_allclose(canonical_profile.potential_at(x), expected)


def test_reversed_profile_of_symmetric_structure(canonical_profile):
    assert canonical_profile.reversed().segments == canonical_profile.segments


def test_double_barrier_geometry_for_random_inputs():
    rng = np.random.default_rng(11)
    for _ in range(50):
        height, barrier, well = rng.uniform(1.0, 500.0), rng.uniform(0.1, 20.0), rng.uniform(0.1, 30.0)
        mass_ratio = rng.uniform(0.01, 1.0)
        profile = build_double_barrier(height, barrier, well, mass_ratio)
        assert profile.length == pytest.approx(2.0 * barrier + well, rel=1e-14)
        np.testing.assert_allclose(profile.heights, [height, 0.0, height])
        np.testing.assert_allclose(profile.boundaries, [0.0, barrier, barrier + well, 2.0 * barrier + well])
        assert profile.mass_ratio == mass_ratio
        assert profile.reversed().segments == profile.segments
        inside = np.array([0.5 * barrier, barrier + 0.5 * well, 1.5 * barrier + well])
        np.testing.assert_allclose(profile.potential_at(inside), [height, 0.0, height])
        assert not profile.is_free


def test_wavenumber_conversion_round_trip():
    c2 = CONSTANTS.hbar2_over_2m(0.067)
    assert c2 == pytest.approx(568.654, rel=1e-4)
    k = wavenumber_from_energy(74.97, 0.067)
    assert k == pytest.approx(np.sqrt(74.97 / c2))
    assert k == pytest.approx(0.363095, rel=1e-5)
    assert energy_from_wavenumber(k, 0.067) == pytest.approx(74.97)


def test_classical_speed_in_nm_per_ps():
    speed = classical_speed(74.97, 0.067)
    assert 627.0 < speed < 628.0


def test_negative_energy_is_rejected():
    with pytest.raises(PhysicalDomainError):
        wavenumber_from_energy(-1.0, 0.067)
    with pytest.raises(PhysicalDomainError):
        classical_speed(np.array([1.0, -2.0]), 0.067)


@pytest.mark.parametrize('height, barrier, well', [
    (230.0, 0.0, 5.0),
    (230.0, 5.0, -1.0),
    (-1.0, 5.0, 5.0),
])
def test_invalid_geometry(height, barrier, well):
    with pytest.raises(InvalidParameterError):
        build_double_barrier(height, barrier, well, 0.067)


def test_invalid_mass_ratio():
    with pytest.raises(InvalidParameterError):
        PotentialProfile.from_pairs([(5.0, 230.0)], 0.0)


def test_zero_height_gives_free_profile(free_profile):
    assert free_profile.is_free
    assert free_profile.length == pytest.approx(15.0)
