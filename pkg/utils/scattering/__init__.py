#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
定态散射包

传递矩阵、透射/反射振幅与定态波函数
"""

from .transfer_matrix import (
    ScatteringAmplitudes,
    TransferMatrix,
    propagate_value_derivative,
    scattering_amplitudes,
    stationary_wave,
    transfer_matrix,
    transmission_scan,
)

__all__ = [
    'ScatteringAmplitudes',
    'TransferMatrix',
    'propagate_value_derivative',
    'scattering_amplitudes',
    'stationary_wave',
    'transfer_matrix',
    'transmission_scan',
]
