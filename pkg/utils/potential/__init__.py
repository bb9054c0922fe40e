#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
势与单位制包

提供物理常数、分段常数势以及能量/波数/速度换算
"""

from .profile import (
    CONSTANTS,
    PhysicalConstants,
    PotentialProfile,
    Segment,
    build_double_barrier,
    classical_speed,
    energy_from_wavenumber,
    wavenumber_from_energy,
)

__all__ = [
    'CONSTANTS',
    'PhysicalConstants',
    'PotentialProfile',
    'Segment',
    'build_double_barrier',
    'classical_speed',
    'energy_from_wavenumber',
    'wavenumber_from_energy',
]
