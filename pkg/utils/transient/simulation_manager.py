#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
模拟统一管理器

把势、极点族与入射条件组合在一起，供模式脚本调用。
极点搜索对每个势只做一次，极点族按 (入射能量, 极点数) 缓存。
"""

import threading
from typing import Dict, List, Optional, Tuple

import numpy as np

from utils.errors import InvalidParameterError
from utils.global_manager import log_info
from utils.potential import PotentialProfile, classical_speed
from utils.resonance import DEFAULT_POLE_COUNT, PoleEntry, PoleFamily, ResonancePole, family_from_poles, find_poles

from .closed_form import TimeScales, time_scales
from .solutions import (
    IncidenceSpec,
    TimeTrace,
    WaveSnapshot,
    external_snapshot,
    external_trace,
    internal_snapshot,
    internal_trace,
)


class SimulationManager:
    """模拟统一管理器"""

    def __init__(self, profile: PotentialProfile, pole_count: int = DEFAULT_POLE_COUNT,
                 seed_scan: Tuple[float, float] = (10.0, 200.0), tail_closure: bool = True):
        """
        初始化模拟管理器

        Args:
            profile: 势
            pole_count: 级数中保留的极点数 N
            seed_scan: 实轴极点扫描区间（meV）
            tail_closure: 是否启用截断尾项补偿
        """
        self.profile = profile
        self.pole_count = pole_count
        self.seed_scan = seed_scan
        self.tail_closure = tail_closure
        self._poles: Optional[List[ResonancePole]] = None
        self._families: Dict[Tuple[float, int], PoleFamily] = {}
        self._lock = threading.RLock()

    def poles(self) -> List[ResonancePole]:
        """第四象限极点（首次调用时搜索）"""
        with self._lock:
            if self._poles is None:
                self._poles = find_poles(self.profile, self.seed_scan)
            return self._poles

    def pole_family(self, energy: float, count: Optional[int] = None) -> PoleFamily:
        """获取（必要时构造）按入射能量排序的极点族"""
        count = self.pole_count if count is None else count
        key = (float(energy), count)
        with self._lock:
            if key not in self._families:
                self._families[key] = family_from_poles(self.profile, self.poles(), energy, count)
            return self._families[key]

    def reference_entry(self, energy: float, index: int = 1) -> PoleEntry:
        """参考极点条目（默认 n = 1）"""
        return self.pole_family(energy).by_index(index)

    def resolve_incidence(self, energy: Optional[float] = None, delta_e_gamma: Optional[float] = None,
                          side: str = 'below', pole_index: int = 1) -> IncidenceSpec:
        """
        解析入射条件：绝对能量，或以 Γ 为单位的 ΔE

        以 ΔE 给出时由已找到的极点中序号为 pole_index 者确定能量。
        """
        if (energy is None) == (delta_e_gamma is None):
            raise InvalidParameterError("energy 与 delta_e_gamma 必须恰好给出一个")
        if energy is not None:
            pole = self.reference_entry(energy, pole_index).pole
            return IncidenceSpec.from_energy(energy, pole)
        pole = next((p for p in self.poles() if p.index == pole_index), None)
        if pole is None:
            raise InvalidParameterError(f"没有序号为 {pole_index} 的极点")
        spec = IncidenceSpec.from_offset(pole, delta_e_gamma * pole.width, side)
        log_info(f"ΔE = {delta_e_gamma}Γ = {spec.delta_e:.6f} meV，入射能量 E = {spec.energy:.6f} meV")
        return spec

    def trace(self, energy: float, x: float, t: np.ndarray) -> TimeTrace:
        """固定位置的时间序列，自动选择内部或外部解"""
        family = self.pole_family(energy)
        if x > self.profile.length:
            return external_trace(self.profile, family, energy, x, t, tail_closure=self.tail_closure)
        return internal_trace(self.profile, family, energy, x, t, tail_closure=self.tail_closure)

    def snapshot(self, energy: float, x: np.ndarray, t: float, region: str) -> WaveSnapshot:
        family = self.pole_family(energy)
        builder = external_snapshot if region == 'external' else internal_snapshot
        return builder(self.profile, family, energy, x, t, tail_closure=self.tail_closure)

    def time_scales(self, energy: float, count: int = 3, pole_index: int = 1) -> TimeScales:
        return time_scales(self.reference_entry(energy, pole_index).pole, energy, count)

    def classical_front(self, energy: float, t: float) -> float:
        """x = vt（nm），t 以 fs 计"""
        return classical_speed(energy, self.profile.mass_ratio, self.profile.constants) * t / 1000.0
