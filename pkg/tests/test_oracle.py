#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Crank–Nicolson 网格基准"""

import numpy as np
import pytest

from utils.errors import InvalidParameterError, OutOfValidityError
from utils.oracle import (
    CrankNicolsonPropagator,
    GridSpec,
    GridState,
    align_left_wall,
    compare_with_analytic,
    evolve,
    initialize_shutter_state,
    validity_horizon,
)
from utils.potential import classical_speed, wavenumber_from_energy
from utils.transient import free_shutter_wave, relative_l2_error


def _gaussian(grid: GridSpec, center: float, sigma: float, k0: float) -> GridState:
    x = grid.x
    psi = np.exp(-((x - center) / (2.0 * sigma)) ** 2 + 1j * k0 * x)
    return GridState.from_values(grid, psi)


def test_shutter_initial_state():
    k = wavenumber_from_energy(74.97, 0.067)
    grid = align_left_wall(GridSpec(x_min=-200.0, x_max=200.0, dx=0.05, dt=0.1), k)
    state = initialize_shutter_state(grid, k)
    x = state.x
    assert np.all(state.psi[x >= 0] == 0)
    assert state.psi[0] == 0 and state.psi[-1] == 0
    assert np.max(np.abs(state.psi)) == pytest.approx(2.0, abs=1e-3)
    assert abs(np.sin(k * grid.x_min)) <= k * grid.dx
    offset = grid.x_min / grid.dx
    assert offset == pytest.approx(round(offset), abs=1e-6)


def test_grid_validation(canonical_profile):
    with pytest.raises(InvalidParameterError):
        GridSpec(x_min=10.0, x_max=200.0).validate(canonical_profile)
    with pytest.raises(InvalidParameterError):
        GridSpec(x_min=-100.0, x_max=10.0).validate(canonical_profile)
    with pytest.raises(InvalidParameterError):
        GridSpec(x_min=-100.03, x_max=200.0, dx=0.05).validate(canonical_profile)
    with pytest.raises(InvalidParameterError):
        GridSpec(dt=0.0).validate(canonical_profile)
    GridSpec().validate(canonical_profile)


def test_validity_horizon_arithmetic():
    grid = GridSpec(x_min=-3000.0, x_max=2000.0)
    speed = classical_speed(74.97, 0.067) / 1000.0
    horizon = validity_horizon(grid, 74.97, 500.0, 0.067)
    assert horizon == pytest.approx(min(3000.0 / speed, 1500.0 / speed))
    assert validity_horizon(grid, 150.0, 500.0, 0.067) < horizon


def test_default_grid_covers_default_comparison_times(canonical_profile):
    region_end = canonical_profile.length + 300.0
    assert validity_horizon(GridSpec(), 74.97, region_end, 0.067) > 2000.0
    # 右墙放在 1500 nm 时，比较区在 2 ps 之前就会收到墙反射
    assert validity_horizon(GridSpec(x_max=1500.0), 74.97, region_end, 0.067) < 2000.0


def test_norm_is_conserved(canonical_profile):
    grid = GridSpec(x_min=-60.0, x_max=60.0, dx=0.1, dt=0.5)
    state = _gaussian(grid, -20.0, 4.0, 0.35)
    final = evolve(state, canonical_profile, 10000)
    assert final.t == pytest.approx(5000.0)
    assert abs(final.norm / state.norm - 1.0) < 1e-9


def test_propagator_rejects_foreign_state(canonical_profile):
    grid = GridSpec(x_min=-60.0, x_max=60.0, dx=0.1, dt=0.5)
    other = GridSpec(x_min=-60.0, x_max=60.0, dx=0.1, dt=0.25)
    propagator = CrankNicolsonPropagator(canonical_profile, grid)
    with pytest.raises(InvalidParameterError):
        propagator.run(_gaussian(other, -20.0, 4.0, 0.35), 1)
    with pytest.raises(InvalidParameterError):
        GridState.from_values(grid, np.zeros(3))


def test_time_step_convergence_order(free_profile):
    t_end = 20.0

    def run(dt):
        grid = GridSpec(x_min=-200.0, x_max=200.0, dx=0.05, dt=dt)
        return evolve(_gaussian(grid, -30.0, 5.0, 0.3), free_profile, int(round(t_end / dt))).psi

    reference = run(0.025)
    coarse = np.linalg.norm(run(0.4) - reference)
    fine = np.linalg.norm(run(0.2) - reference)
    order = np.log2(coarse / fine)
    assert 1.8 <= order <= 2.2


def test_free_shutter_against_closed_form(free_profile):
    k = wavenumber_from_energy(74.97, 0.067)
    grid = align_left_wall(GridSpec(x_min=-400.0, x_max=400.0, dx=0.02, dt=0.05), k)
    state = evolve(initialize_shutter_state(grid, k), free_profile, 1000)
    window = (grid.x >= -100.0) & (grid.x <= 100.0)
    exact = free_shutter_wave(grid.x[window], state.t, k, free_profile)
    assert relative_l2_error(exact, state.psi[window]) < 1e-2


def test_comparison_rejects_times_beyond_horizon(canonical_profile, canonical_family):
    grid = GridSpec(x_min=-300.0, x_max=400.0)
    with pytest.raises(OutOfValidityError) as info:
        compare_with_analytic(canonical_profile, canonical_family, 74.97, [100.0, 5000.0], grid=grid)
    assert info.value.threshold_fs < 5000.0
    with pytest.raises(InvalidParameterError):
        compare_with_analytic(canonical_profile, canonical_family, 74.97, [100.03], grid=grid)


@pytest.mark.slow
def test_grid_agrees_with_resonant_expansion(canonical_profile, canonical_family):
    grid = GridSpec(x_min=-1500.0, x_max=1200.0, dx=0.05, dt=0.1)
    report = compare_with_analytic(canonical_profile, canonical_family, 74.97, [500.0, 1000.0], grid=grid)
    assert report.horizon >= 1000.0
    assert report.max_error < 2e-2
    assert report.norm_drift < 1e-8
    assert report.to_dict()['max_relative_l2_error'] == report.max_error
