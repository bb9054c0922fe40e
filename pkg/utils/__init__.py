#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
RTD-Shutter 工具包

双势垒结构量子快门问题的散射、共振极点、含时解与数值基准。
数值子包按需导入：utils.potential、utils.scattering、utils.special、
utils.resonance、utils.transient、utils.oracle、utils.task。
"""

__version__ = "0.1.0"

# 导入核心工具
from .global_manager import (
    get_global,
    set_global,
    running_operation,
    log_debug,
    log_info,
    log_warning,
    log_error,
    GlobalManager,
    RunState,
)

from .config_manager import ConfigManager

from .errors import (
    SimulationError,
    InvalidParameterError,
    PhysicalDomainError,
    SingularInputError,
    SingularTimeError,
    ConvergenceError,
    DegenerateStateError,
    MoshinskyOverflowError,
    OutOfValidityError,
    NumericalError,
    ConfigError,
)

__all__ = [
    '__version__',

    # 核心工具
    'get_global',
    'set_global',
    'running_operation',
    'log_debug',
    'log_info',
    'log_warning',
    'log_error',
    'GlobalManager',
    'RunState',
    'ConfigManager',

    # 异常
    'SimulationError',
    'InvalidParameterError',
    'PhysicalDomainError',
    'SingularInputError',
    'SingularTimeError',
    'ConvergenceError',
    'DegenerateStateError',
    'MoshinskyOverflowError',
    'OutOfValidityError',
    'NumericalError',
    'ConfigError',
]
