#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
数值基准包

Crank–Nicolson 网格演化及其与解析解的比较
"""

from .crank_nicolson import (
    COMPARISON_MARGIN,
    CrankNicolsonPropagator,
    GridSpec,
    GridState,
    OracleReport,
    align_left_wall,
    analytic_on_grid,
    compare_with_analytic,
    evolve,
    initialize_shutter_state,
    validity_horizon,
)

__all__ = [
    'COMPARISON_MARGIN',
    'CrankNicolsonPropagator',
    'GridSpec',
    'GridState',
    'OracleReport',
    'align_left_wall',
    'analytic_on_grid',
    'compare_with_analytic',
    'evolve',
    'initialize_shutter_state',
    'validity_horizon',
]
