#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
任务管理器

负责场景登记表的加载、模式脚本的装载与执行
"""

import importlib.util
import json
import os
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from utils.config_manager import ConfigManager, deep_merge
from utils.errors import ConfigError, SimulationError
from utils.global_manager import (
    get_global,
    global_manager,
    log_error,
    log_info,
    log_warning,
    set_global,
)

from .scenario import ScenarioConfig

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
SCRIPT_DIR = os.path.join(PROJECT_ROOT, 'resource', 'script')
SCENARIO_REGISTRY = os.path.join(PROJECT_ROOT, 'config', 'scenarios.json')
USER_SETTINGS = os.path.join(PROJECT_ROOT, 'user_data', 'settings.json')


class TaskStatus(Enum):
    """任务状态枚举"""
    IDLE = "idle"
    RUNNING = "running"
    FINISHED = "finished"
    ERROR = "error"


@dataclass
class ScenarioInfo:
    """场景登记信息"""
    scenario_id: str
    name: str
    description: str
    script_file: str
    category: str
    enabled: bool
    parameters: Dict[str, Any] = field(default_factory=dict)

    @property
    def script_path(self) -> str:
        """获取脚本文件完整路径"""
        return os.path.join(SCRIPT_DIR, self.script_file)

    def is_available(self) -> bool:
        """检查场景是否可用"""
        return self.enabled and os.path.exists(self.script_path)

    def get_parameters(self, config_manager: Optional[ConfigManager] = None) -> Dict[str, Any]:
        """
        合并后的场景参数

        优先级（高到低）：用户设置 Scenarios.<id>、登记表 parameters、用户设置 Scenarios.defaults
        """
        config_manager = config_manager or ConfigManager(USER_SETTINGS)
        defaults = config_manager.get('Scenarios.defaults', {}) or {}
        overrides = config_manager.get(f'Scenarios.{self.scenario_id}', {}) or {}
        return deep_merge(deep_merge(defaults, self.parameters), overrides)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式"""
        return {
            'scenario_id': self.scenario_id,
            'name': self.name,
            'description': self.description,
            'script_file': self.script_file,
            'category': self.category,
            'enabled': self.enabled,
            'available': self.is_available(),
        }


@dataclass
class RunResult:
    """一次运行的结果"""
    mode: str
    files: List[str]
    manifest: Optional[str]
    elapsed: float


class TaskRunner:
    """任务执行器"""

    def __init__(self, config: ScenarioConfig, script_file: Optional[str] = None, name: Optional[str] = None):
        """
        初始化任务执行器

        Args:
            config: 已校验的场景配置
            script_file: 脚本文件名，默认为 <mode>.py
            name: 显示名称
        """
        self.config = config
        self.script_file = script_file or f'{config.mode}.py'
        self.name = name or config.name or config.mode
        self.status = TaskStatus.IDLE
        self.script_instance = None
        self.files: List[str] = []
        self.error: Optional[BaseException] = None

    @property
    def script_path(self) -> str:
        return os.path.join(SCRIPT_DIR, self.script_file)

    def start(self) -> bool:
        """
        同步执行任务

        Returns:
            bool: 是否成功完成
        """
        if self.status == TaskStatus.RUNNING:
            log_warning(f"任务 {self.name} 已在运行")
            return False

        if not self._load_script():
            self.status = TaskStatus.ERROR
            return False

        self.error = None
        self.status = TaskStatus.RUNNING
        set_global('task.status', TaskStatus.RUNNING.value)
        set_global('task.start_time', time.time(), notify=False)

        self._run_script()
        return self.status == TaskStatus.FINISHED

    def _load_script(self) -> bool:
        """
        加载脚本文件

        Returns:
            bool: 是否成功加载
        """
        try:
            script_path = self.script_path
            if not os.path.exists(script_path):
                log_error(f"脚本文件不存在: {script_path}")
                return False

            spec = importlib.util.spec_from_file_location(f"mode_script_{self.config.mode}", script_path)
            if not spec or not spec.loader:
                log_error(f"无法加载脚本文件: {script_path}")
                return False

            module = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(module)

            if not hasattr(module, 'create_script'):
                log_error(f"脚本文件 {script_path} 缺少 create_script 函数")
                return False
            self.script_instance = module.create_script(self.config)
            return True

        except Exception as e:
            log_error(f"加载脚本失败: {e}")
            self.error = e
            return False

    def _run_script(self):
        """运行脚本，异常记录到 self.error 而不向外传播"""
        try:
            self.files = list(self.script_instance.start() or [])
            if self.status == TaskStatus.RUNNING:
                self.status = TaskStatus.FINISHED
                log_info(f"任务 {self.name} 正常结束，写出 {len(self.files)} 个文件")
        except SimulationError as e:
            operation = get_global('run.failed_operation') or self.config.mode
            log_error(f"任务 {self.name} 在操作 {operation} 中失败: {e}")
            self.error = e
            self.status = TaskStatus.ERROR
        except Exception as e:
            log_error(f"脚本执行出错: {e}")
            self.error = e
            self.status = TaskStatus.ERROR
        finally:
            set_global('task.status', self.status.value)


class TaskManager:
    """场景管理器"""

    def __init__(self, config_path: str = SCENARIO_REGISTRY, settings_path: str = USER_SETTINGS):
        """
        初始化场景管理器

        Args:
            config_path: 场景登记表路径
            settings_path: 用户设置路径
        """
        self.config_path = config_path
        self.settings = ConfigManager(settings_path)
        self.scenarios: Dict[str, ScenarioInfo] = {}
        self.categories: List[str] = []
        self.load_scenarios()

    def load_scenarios(self) -> bool:
        """
        加载场景登记表

        Returns:
            bool: 是否成功加载
        """
        try:
            if not os.path.exists(self.config_path):
                log_error(f"场景登记表不存在: {self.config_path}")
                return False

            with open(self.config_path, 'r', encoding='utf-8') as f:
                config_data = json.load(f)

            self.scenarios.clear()
            for scenario_id, data in config_data.get('scenarios', {}).items():
                self.scenarios[scenario_id] = ScenarioInfo(
                    scenario_id=scenario_id,
                    name=data.get('name', scenario_id),
                    description=data.get('description', ''),
                    script_file=data.get('script_file', ''),
                    category=data.get('category', '其他'),
                    enabled=data.get('enabled', True),
                    parameters=dict(data.get('parameters', {})),
                )
            self.categories = config_data.get('categories', [])
            log_info(f"场景加载完成，共 {len(self.scenarios)} 个场景")
            return True

        except (OSError, json.JSONDecodeError) as e:
            log_error(f"加载场景登记表失败: {e}")
            return False

    def get_scenario(self, scenario_id: str) -> Optional[ScenarioInfo]:
        return self.scenarios.get(scenario_id)

    def get_scenarios_by_category(self, category: str) -> List[ScenarioInfo]:
        return [s for s in self.scenarios.values() if s.category == category]

    def build_config(self, scenario_id: str, overrides: Optional[Dict[str, Any]] = None) -> ScenarioConfig:
        """
        由登记表中的场景构造 ScenarioConfig

        Raises:
            ConfigError: 场景不存在、不可用或参数非法
        """
        info = self.get_scenario(scenario_id)
        if info is None:
            raise ConfigError(f"场景不存在: {scenario_id}", field='scenario')
        if not info.is_available():
            raise ConfigError(f"场景不可用: {scenario_id}", field='scenario')
        parameters = info.get_parameters(self.settings)
        parameters.setdefault('mode', os.path.splitext(info.script_file)[0])
        parameters.setdefault('name', scenario_id)
        parameters.setdefault('output_dir', os.path.join(self.settings.get('general.output_dir', 'output'), scenario_id))
        for key, value in (overrides or {}).items():
            if value is not None:
                parameters[key] = value
        return ScenarioConfig.from_mapping(parameters)


def run_scenario(config: ScenarioConfig, scenario: Optional[str] = None) -> RunResult:
    """
    执行一个场景：按模式分派脚本，写出输出文件与运行清单

    Raises:
        SimulationError: 脚本失败（异常中带有失败操作名，见 run.failed_operation）
    """
    started = time.perf_counter()
    global_manager.begin_run(config.mode, scenario or config.name)
    runner = TaskRunner(config)
    if not runner.start():
        error = runner.error
        if not get_global('run.failed_operation'):
            global_manager.fail_run(config.mode)
        if isinstance(error, SimulationError):
            raise error
        raise SimulationError(f"模式 {config.mode} 执行失败: {error}") from error

    global_manager.finish_run()
    manifest = next((path for path in runner.files if path.endswith('manifest.json')), None)
    return RunResult(mode=config.mode, files=runner.files, manifest=manifest,
                     elapsed=time.perf_counter() - started)


# 全局任务管理器实例
_task_manager = None


def get_task_manager() -> TaskManager:
    """获取全局任务管理器实例"""
    global _task_manager
    if _task_manager is None:
        _task_manager = TaskManager()
    return _task_manager
