#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
共享夹具

标准结构：230 meV / 5 nm / 5 nm / 5 nm，m* = 0.067 mₑ，L = 15 nm；
参考入射能量取 ε₁ - 5Γ₁ ≈ 74.97 meV。
"""

import pytest

from utils.global_manager import global_manager
from utils.potential import build_double_barrier
from utils.resonance import build_pole_family

CANONICAL_ENERGY = 74.97


@pytest.fixture(autouse=True)
def reset_global_state():
    global_manager.reset()
    yield
    global_manager.reset()


@pytest.fixture(scope='session')
def canonical_profile():
    return build_double_barrier(230.0, 5.0, 5.0, 0.067)


@pytest.fixture(scope='session')
def free_profile():
    return build_double_barrier(0.0, 5.0, 5.0, 0.067)


@pytest.fixture(scope='session')
def canonical_family(canonical_profile):
    return build_pole_family(canonical_profile, CANONICAL_ENERGY, 10)


@pytest.fixture(scope='session')
def first_entry(canonical_family):
    """离入射能量最近的极点，即阱中最低的共振"""
    return canonical_family[0]


@pytest.fixture(scope='session')
def detuned_energy(first_entry):
    """E = ε₁ - 5Γ₁"""
    pole = first_entry.pole
    return pole.energy - 5.0 * pole.width
