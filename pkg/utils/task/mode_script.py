#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
模式脚本基类

resource/script/ 下的每个模式脚本继承 ModeScript，只实现 run()；
运行清单与并行计算由基类统一处理。
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from utils.global_manager import log_info, log_warning, running_operation
from utils.resonance import PoleFamily
from utils.transient import IncidenceSpec, SimulationManager

from .output_writer import OutputWriter
from .scenario import ScenarioConfig


def uniform_axis(start: float, stop: float, step: float) -> np.ndarray:
    """[start, stop] 上的等距点（点数由步长取整决定，保证可重复）"""
    count = int(round((stop - start) / step)) + 1
    return np.linspace(start, stop, max(count, 2))


class ModeScript:
    """模式脚本基类"""

    mode = ''

    def __init__(self, config: ScenarioConfig):
        """
        初始化脚本

        Args:
            config: 已校验的场景配置
        """
        self.config = config
        self.profile = config.profile()
        self.manager = SimulationManager(self.profile, config.poles, config.seed_scan_mev, config.tail_closure)
        self.writer: OutputWriter = None
        self.resolved: Dict[str, Any] = {}
        self.notes: List[str] = []
        self.running = False

    def start(self) -> List[str]:
        """
        执行模式计算并写出运行清单

        Returns:
            已写出的文件路径（含清单）
        """
        if self.running:
            log_warning(f"{self.mode} 脚本已在运行")
            return []

        self.running = True
        log_info(f"开始执行 {self.mode} 模式，输出目录 {self.config.output_dir}")
        try:
            self.writer = OutputWriter(self.config.output_dir)
            with running_operation(self.mode):
                self.run()
            self.resolved.update(self._base_resolved())
            self.writer.write_manifest(self.config.to_dict(), self.resolved, self.notes)
            return list(self.writer.files)
        finally:
            self.running = False

    def run(self) -> None:
        raise NotImplementedError

    def _base_resolved(self) -> Dict[str, Any]:
        constants = self.profile.constants
        return {
            'constants': {'hbar_mev_fs': constants.hbar, 'hbar2_over_2me_mev_nm2': constants.hbar2_over_2me},
            'potential': self.profile.describe(),
            'length_nm': self.profile.length,
            'mass_ratio': self.profile.mass_ratio,
        }

    def resolve_incidence(self, delta_e_gamma: float = None) -> IncidenceSpec:
        """按配置（或给定的 ΔE/Γ）解析入射条件并记入清单"""
        config = self.config
        with running_operation('resolve_incidence'):
            if delta_e_gamma is None and config.delta_e_gamma is None:
                spec = self.manager.resolve_incidence(energy=config.energy_mev, side=config.side,
                                                      pole_index=config.pole_index)
            else:
                gamma = config.delta_e_gamma if delta_e_gamma is None else delta_e_gamma
                spec = self.manager.resolve_incidence(delta_e_gamma=gamma, side=config.side,
                                                      pole_index=config.pole_index)
        self.resolved.setdefault('incidence', []).append({
            'energy_mev': spec.energy, 'k_per_nm': spec.k, 'pole_index': spec.pole_index,
            'delta_e_mev': spec.delta_e, 'side': spec.side, 'delta_e_gamma': delta_e_gamma
            if delta_e_gamma is not None else config.delta_e_gamma,
        })
        return spec

    def pole_family(self, energy: float) -> PoleFamily:
        with running_operation('build_pole_family'):
            family = self.manager.pole_family(energy)
        self.resolved.setdefault('pole_tables', {})[f'{energy:.17g}'] = family.table()
        return family

    def map_parallel(self, func: Callable, items: Sequence, workers: int = None) -> list:
        """并行计算独立任务，结果按输入顺序返回"""
        if len(items) <= 1:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(func, items))
