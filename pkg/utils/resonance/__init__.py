#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
共振包

极点搜索、Gamow 态、展开系数与极点族
"""

from .family import (
    DEFAULT_POLE_COUNT,
    PoleEntry,
    PoleFamily,
    build_pole_family,
    family_from_poles,
    find_poles,
    isolation_ratios,
)
from .gamow import GamowState, expansion_coefficients, gamow_state, one_level_transmission, residue_check
from .poles import (
    ResonancePeak,
    ResonancePole,
    denominator,
    locate_pole_seeds,
    refine_pole,
    refine_root,
    resonance_peaks,
    scan_complex_seeds,
)

__all__ = [
    'DEFAULT_POLE_COUNT',
    'GamowState',
    'PoleEntry',
    'PoleFamily',
    'ResonancePeak',
    'ResonancePole',
    'build_pole_family',
    'denominator',
    'expansion_coefficients',
    'family_from_poles',
    'find_poles',
    'gamow_state',
    'isolation_ratios',
    'locate_pole_seeds',
    'one_level_transmission',
    'refine_pole',
    'refine_root',
    'resonance_peaks',
    'residue_check',
    'scan_complex_seeds',
]
