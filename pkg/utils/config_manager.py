#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置管理器

JSON 用户设置（点号分隔的层级键）以及场景文件使用的扁平 key = value 文本格式。
"""

import json
import os
from dataclasses import dataclass
from typing import Any, Dict, Optional

from utils.errors import ConfigError
from utils.global_manager import log_warning


@dataclass(frozen=True)
class FlatEntry:
    """扁平配置中的一项，保留原始文本与行号用于诊断"""
    key: str
    value: str
    line: int


class ConfigManager:
    """配置文件管理器"""

    def __init__(self, config_path: str = "user_data/settings.json"):
        """
        初始化配置管理器

        Args:
            config_path: 设置文件路径
        """
        self.config_path = config_path
        self.config_data: Dict[str, Any] = {}
        self.load_config()

    def load_config(self) -> None:
        """加载配置文件，不存在时使用空配置"""
        try:
            if os.path.exists(self.config_path):
                with open(self.config_path, 'r', encoding='utf-8') as f:
                    self.config_data = json.load(f)
            else:
                self.config_data = {}
        except (OSError, json.JSONDecodeError) as e:
            log_warning(f"加载配置文件失败，使用空配置: {e}")
            self.config_data = {}

    def save_config(self) -> bool:
        """
        保存配置文件（临时文件 + 替换）

        Returns:
            bool: 是否保存成功
        """
        try:
            config_dir = os.path.dirname(self.config_path)
            if config_dir:
                os.makedirs(config_dir, exist_ok=True)

            tmp_path = self.config_path + '.tmp'
            with open(tmp_path, 'w', encoding='utf-8') as f:
                json.dump(self.config_data, f, ensure_ascii=False, indent=2)
            os.replace(tmp_path, self.config_path)
            return True
        except OSError as e:
            log_warning(f"保存配置文件失败: {e}")
            return False

    def get(self, key: str, default: Any = None) -> Any:
        """
        获取配置值

        Args:
            key: 配置键，支持点号分隔的层级键，如 'general.log_level'
            default: 默认值

        Returns:
            配置值
        """
        value = self.config_data
        try:
            for k in key.split('.'):
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any) -> None:
        """
        设置配置值

        Args:
            key: 配置键，支持点号分隔的层级键
            value: 配置值
        """
        keys = key.split('.')
        config = self.config_data
        for k in keys[:-1]:
            config = config.setdefault(k, {})
        config[keys[-1]] = value

    def delete(self, key: str) -> bool:
        """
        删除配置项

        Args:
            key: 配置键

        Returns:
            bool: 是否删除成功
        """
        keys = key.split('.')
        config = self.config_data
        try:
            for k in keys[:-1]:
                config = config[k]
            del config[keys[-1]]
            return True
        except (KeyError, TypeError):
            return False


def parse_flat_config(text: str) -> Dict[str, FlatEntry]:
    """
    解析扁平 key = value 配置文本

    每行一个键值对，'#' 之后为注释，空行忽略。键名带单位后缀
    （如 energy_mev、barrier_width_nm），值保持原始字符串，由调用方转换类型。

    Args:
        text: 配置文本

    Returns:
        键到 FlatEntry 的映射（保持出现顺序）

    Raises:
        ConfigError: 行格式错误或键重复
    """
    entries: Dict[str, FlatEntry] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError("缺少 '='，应为 key = value", line=number)
        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ConfigError("键名为空", line=number)
        if not value:
            raise ConfigError("值为空", line=number, field=key)
        if key in entries:
            raise ConfigError(f"重复的键（首次出现在第 {entries[key].line} 行）", line=number, field=key)
        entries[key] = FlatEntry(key=key, value=value, line=number)
    return entries


def load_flat_config(path: str) -> Dict[str, FlatEntry]:
    """
    读取扁平配置文件

    Raises:
        ConfigError: 文件无法读取或格式错误
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"无法读取配置文件 {path}: {e}") from e
    return parse_flat_config(text)


def deep_merge(base: Dict[str, Any], override: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """递归合并两个字典，override 优先"""
    merged = dict(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged
