#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
瞬态动力学包

含时解、闭式密度、时间尺度及其后处理
"""

from .analysis import (
    WavefrontReport,
    locate_maxima,
    locate_wavefront,
    maxima_phase_deviation,
    relative_l2_error,
)
from .closed_form import (
    CrossoverRow,
    TimeScales,
    buildup_cycle_count,
    crossover_sweep,
    empirical_buildup_time,
    external_ratio_closed_form,
    internal_buildup_ratio,
    time_scales,
)
from .simulation_manager import SimulationManager
from .solutions import (
    IncidenceSpec,
    TimeTrace,
    WaveSnapshot,
    external_snapshot,
    external_trace,
    free_shutter_wave,
    internal_snapshot,
    internal_trace,
    psi_external,
    psi_external_one_level,
    psi_internal,
    split_regions,
)

__all__ = [
    'CrossoverRow',
    'IncidenceSpec',
    'SimulationManager',
    'TimeScales',
    'TimeTrace',
    'WaveSnapshot',
    'WavefrontReport',
    'buildup_cycle_count',
    'crossover_sweep',
    'empirical_buildup_time',
    'external_ratio_closed_form',
    'external_snapshot',
    'external_trace',
    'free_shutter_wave',
    'internal_buildup_ratio',
    'internal_snapshot',
    'internal_trace',
    'locate_maxima',
    'locate_wavefront',
    'maxima_phase_deviation',
    'psi_external',
    'psi_external_one_level',
    'psi_internal',
    'relative_l2_error',
    'split_regions',
    'time_scales',
]
