#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
全局运行状态管理器

统一管理一次模拟运行中的全局状态：运行模式、运行状态、失败的操作、
已写出的文件等。提供线程安全的全局变量访问以及日志便利函数。
"""

import logging
import os
import threading
import time
from contextlib import contextmanager
from enum import Enum
from typing import Any, Callable, Dict, List, Optional


LOGGER_NAME = 'RTDShutter'
LOG_LEVEL_ENV = 'RTD_LOG_LEVEL'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class RunState(Enum):
    """运行状态枚举"""
    IDLE = "idle"
    RUNNING = "running"
    FINISHED = "finished"
    ERROR = "error"


def resolve_log_level(level: Optional[str] = None) -> int:
    """
    解析日志级别

    Args:
        level: 级别名称，None 时读取环境变量 RTD_LOG_LEVEL

    Returns:
        logging 模块的级别常量
    """
    name = (level or os.environ.get(LOG_LEVEL_ENV) or 'INFO').upper()
    value = logging.getLevelName(name)
    return value if isinstance(value, int) else logging.INFO


class GlobalManager:
    """全局变量管理器"""

    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        """单例模式实现"""
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        """初始化全局管理器"""
        if hasattr(self, '_initialized'):
            return

        self._initialized = True
        self._lock = threading.RLock()
        self._data: Dict[str, Any] = {}
        self._listeners: Dict[str, List[Callable]] = {}

        self._set_default_values()
        self._setup_logging()

    def _setup_logging(self):
        """设置日志"""
        self.logger = logging.getLogger(f'{LOGGER_NAME}.GlobalManager')
        root = logging.getLogger(LOGGER_NAME)
        if not root.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            root.addHandler(handler)
        root.setLevel(resolve_log_level())

    def set_log_level(self, level: str):
        """运行时调整日志级别（CLI --log-level 或用户设置）"""
        logging.getLogger(LOGGER_NAME).setLevel(resolve_log_level(level))

    def _set_default_values(self):
        """设置默认全局变量"""
        default_values = {
            'run.state': RunState.IDLE,
            'run.mode': None,
            'run.scenario': None,
            'run.failed_operation': None,
            'run.operation': None,
            'run.outputs': [],
            'log_sink': None,
            'start_time': time.time(),
            'last_activity': time.time(),
        }
        for key, value in default_values.items():
            self._data[key] = value

    def get(self, key: str, default: Any = None) -> Any:
        """
        获取全局变量

        Args:
            key: 变量键名
            default: 默认值

        Returns:
            变量值
        """
        with self._lock:
            return self._data.get(key, default)

    def set(self, key: str, value: Any, notify: bool = True) -> None:
        """
        设置全局变量

        Args:
            key: 变量键名
            value: 变量值
            notify: 是否通知监听器
        """
        with self._lock:
            old_value = self._data.get(key)
            self._data[key] = value
            if key != 'last_activity':
                self._data['last_activity'] = time.time()

            if notify and old_value != value:
                self._notify_listeners(key, value, old_value)

    # 事件监听机制

    def add_listener(self, key: str, callback: Callable):
        """
        添加事件监听器

        Args:
            key: 要监听的变量键名
            callback: 回调函数，参数为 (key, new_value, old_value)
        """
        with self._lock:
            self._listeners.setdefault(key, []).append(callback)

    def remove_listener(self, key: str, callback: Callable) -> bool:
        """移除事件监听器"""
        with self._lock:
            if key in self._listeners and callback in self._listeners[key]:
                self._listeners[key].remove(callback)
                return True
            return False

    def _notify_listeners(self, key: str, new_value: Any, old_value: Any):
        """通知监听器"""
        for callback in list(self._listeners.get(key, [])):
            try:
                callback(key, new_value, old_value)
            except Exception as e:
                self.logger.error(f"监听器执行失败 ({key}): {e}")

    # 运行状态相关方法

    def begin_run(self, mode: str, scenario: Optional[str] = None):
        """标记一次运行开始"""
        with self._lock:
            self.set('run.mode', mode)
            self.set('run.scenario', scenario)
            self.set('run.failed_operation', None)
            self.set('run.outputs', [], notify=False)
            self.set('run.state', RunState.RUNNING)
        self.logger.debug(f"运行开始: mode={mode}, scenario={scenario}")

    def finish_run(self):
        """标记运行正常结束"""
        self.set('run.state', RunState.FINISHED)

    def fail_run(self, operation: str):
        """记录失败的操作名并标记运行出错"""
        with self._lock:
            self.set('run.failed_operation', operation)
            self.set('run.state', RunState.ERROR)

    def record_output(self, path: str):
        """记录一个已写出的文件"""
        with self._lock:
            outputs = list(self._data.get('run.outputs', []))
            outputs.append(path)
            self.set('run.outputs', outputs)

    @contextmanager
    def running_operation(self, name: str):
        """
        标记当前正在执行的操作

        块内抛出异常时把该操作记为失败操作后重新抛出。
        """
        previous = self.get('run.operation')
        self.set('run.operation', name, notify=False)
        try:
            yield
        except Exception:
            if self.get('run.failed_operation') is None:
                self.fail_run(name)
            raise
        finally:
            self.set('run.operation', previous, notify=False)

    def reset(self):
        """重置所有状态"""
        with self._lock:
            self._data.clear()
            self._set_default_values()


# 全局实例
global_manager = GlobalManager()


def get_global(key: str, default: Any = None) -> Any:
    """获取全局变量"""
    return global_manager.get(key, default)


def set_global(key: str, value: Any, notify: bool = True):
    """设置全局变量"""
    return global_manager.set(key, value, notify)


def running_operation(name: str):
    """标记当前操作的上下文管理器，见 GlobalManager.running_operation"""
    return global_manager.running_operation(name)


# 日志便利函数

def log_message(level: str, message: str):
    """
    记录通用日志消息

    若注册了带 add_log(level, message) 方法的日志接收器则优先交给它，
    否则回退到标准日志记录器。
    """
    sink = get_global('log_sink')
    if sink is not None and hasattr(sink, 'add_log'):
        sink.add_log(level.upper(), message)
        return
    logger = logging.getLogger(LOGGER_NAME)
    logger.log(resolve_log_level(level), message)


def log_debug(message: str):
    """记录调试日志"""
    log_message("DEBUG", message)


def log_info(message: str):
    """记录信息日志"""
    log_message("INFO", message)


def log_warning(message: str):
    """记录警告日志"""
    log_message("WARNING", message)


def log_error(message: str):
    """记录错误日志"""
    log_message("ERROR", message)
