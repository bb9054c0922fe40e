#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
输出文件写入器

CSV：表头带单位后缀，浮点数 17 位有效数字，LF 换行；
所有文件先写临时文件再原子替换。运行清单记录重现输出所需的全部参数。
"""

import hashlib
import json
import os
import platform
import threading
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np
import psutil

from utils.global_manager import global_manager, log_debug, log_info

MANIFEST_NAME = 'manifest.json'
FLOAT_FORMAT = '.17g'


def _format_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def _jsonable(value: Any) -> Any:
    """把 numpy 标量、复数、元组等转换为 JSON 可表示的值"""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': float(value.real), 'im': float(value.imag)}
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def code_version() -> str:
    """包版本（未安装时回退到源码树中的版本号）"""
    try:
        return version('rtd-shutter')
    except PackageNotFoundError:
        from utils import __version__
        return __version__


def host_info() -> Dict[str, Any]:
    memory = psutil.virtual_memory()
    return {
        'python': platform.python_version(),
        'platform': platform.platform(),
        'cpu_count': psutil.cpu_count(logical=True),
        'memory_total_mib': round(memory.total / 2 ** 20),
        'numpy': np.__version__,
    }


class OutputWriter:
    """输出目录写入器（线程安全，可在并行计算中逐文件写出）"""

    def __init__(self, output_dir: str):
        self.output_dir = output_dir
        self.files: List[str] = []
        self._lock = threading.Lock()
        os.makedirs(output_dir, exist_ok=True)

    def _path(self, name: str) -> str:
        return os.path.join(self.output_dir, name)

    def _atomic_write(self, name: str, text: str) -> str:
        path = self._path(name)
        tmp_path = path + '.tmp'
        with open(tmp_path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
        os.replace(tmp_path, path)
        with self._lock:
            if path not in self.files:
                self.files.append(path)
        global_manager.record_output(path)
        log_debug(f"已写出 {path}")
        return path

    def write_csv(self, name: str, columns: Mapping[str, Sequence[Any]]) -> str:
        """
        按列写 CSV

        Args:
            name: 文件名
            columns: 列名（含单位后缀）到等长序列的有序映射
        """
        header = list(columns)
        data = [np.asarray(columns[key]).ravel() if np.ndim(columns[key]) else np.asarray([columns[key]])
                for key in header]
        length = len(data[0]) if data else 0
        if any(len(column) != length for column in data):
            raise ValueError(f"{name}: 各列长度不一致")
        lines = [','.join(header)]
        for row in range(length):
            lines.append(','.join(_format_cell(column[row]) for column in data))
        return self._atomic_write(name, '\n'.join(lines) + '\n')

    def write_rows(self, name: str, rows: Sequence[Mapping[str, Any]]) -> str:
        """按行写 CSV，列顺序取第一行的键顺序"""
        if not rows:
            return self._atomic_write(name, '')
        header = list(rows[0])
        lines = [','.join(header)]
        lines.extend(','.join(_format_cell(row[key]) for key in header) for row in rows)
        return self._atomic_write(name, '\n'.join(lines) + '\n')

    def write_json(self, name: str, data: Any) -> str:
        text = json.dumps(_jsonable(data), ensure_ascii=False, indent=2, sort_keys=False)
        return self._atomic_write(name, text + '\n')

    def write_manifest(self, config: Mapping[str, Any], resolved: Mapping[str, Any],
                       notes: Optional[Sequence[str]] = None) -> str:
        """
        写运行清单

        Args:
            config: 场景配置（全部字段）
            resolved: 运行时解析出的量（常数、势、极点表、入射条件等）
            notes: 额外说明，例如哪些时刻是重构值
        """
        outputs = []
        for path in sorted(self.files):
            with open(path, 'rb') as f:
                digest = hashlib.sha256(f.read()).hexdigest()
            outputs.append({'file': os.path.basename(path), 'sha256': digest})

        manifest = {
            'code_version': code_version(),
            'created_utc': datetime.now(timezone.utc).isoformat(timespec='seconds'),
            'config': dict(config),
            'resolved': dict(resolved),
            'notes': list(notes or []),
            'outputs': outputs,
            'host': host_info(),
        }
        path = self._atomic_write(MANIFEST_NAME, json.dumps(_jsonable(manifest), ensure_ascii=False, indent=2) + '\n')
        log_info(f"运行清单已写出: {path}（{len(outputs)} 个输出文件）")
        return path
