#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
任务管理包

提供场景配置、模式脚本的加载与执行以及输出文件写入
"""

from .mode_script import ModeScript, uniform_axis
from .output_writer import OutputWriter, code_version
from .scenario import MODES, ScenarioConfig
from .task_manager import (
    RunResult,
    ScenarioInfo,
    TaskManager,
    TaskRunner,
    TaskStatus,
    get_task_manager,
    run_scenario,
)

__all__ = [
    'MODES',
    'ModeScript',
    'OutputWriter',
    'RunResult',
    'ScenarioConfig',
    'ScenarioInfo',
    'TaskManager',
    'TaskRunner',
    'TaskStatus',
    'code_version',
    'get_task_manager',
    'run_scenario',
    'uniform_axis',
]
