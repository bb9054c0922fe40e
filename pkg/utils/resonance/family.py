#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
极点族：精化、去重、排序、截断并配上镜像伙伴
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from utils.errors import ConvergenceError, PhysicalDomainError
from utils.global_manager import log_info, log_warning
from utils.potential import PotentialProfile

from .gamow import GamowState, gamow_state
from .poles import ResonancePole, locate_pole_seeds, refine_pole, scan_complex_seeds

DEDUPLICATION_DISTANCE = 1e-8
DEFAULT_POLE_COUNT = 10


@dataclass(frozen=True)
class PoleEntry:
    """第四象限极点、其 Gamow 态及第三象限镜像"""
    pole: ResonancePole
    state: GamowState
    isolation_ratio: float

    @property
    def mirror_pole(self) -> ResonancePole:
        return self.pole.mirror()

    @property
    def mirror_state(self) -> GamowState:
        return self.state.mirror()

    def pairs(self) -> Tuple[Tuple[ResonancePole, GamowState], Tuple[ResonancePole, GamowState]]:
        """(k_n, u_n) 与 (k_{-n}, u_{-n})"""
        return (self.pole, self.state), (self.mirror_pole, self.mirror_state)


@dataclass(frozen=True)
class PoleFamily:
    """
    按 |ε_n - E| 递增排序的极点族

    Attributes:
        profile: 势
        reference_energy: 排序所用的入射能量（meV）
        entries: 极点条目
    """
    profile: PotentialProfile
    reference_energy: float
    entries: Tuple[PoleEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[PoleEntry]:
        return iter(self.entries)

    def __getitem__(self, item: int) -> PoleEntry:
        return self.entries[item]

    @property
    def poles(self) -> List[ResonancePole]:
        return [entry.pole for entry in self.entries]

    def truncated(self, count: Optional[int]) -> 'PoleFamily':
        """保留最靠近入射能量的 count 个极点"""
        if count is None or count >= len(self.entries):
            return self
        return PoleFamily(self.profile, self.reference_energy, self.entries[:count])

    def by_index(self, index: int) -> PoleEntry:
        """按极点序号查找（序号按 Re k 递增编号）"""
        for entry in self.entries:
            if entry.pole.index == index:
                return entry
        raise KeyError(f"极点族中没有序号 {index}")

    def table(self) -> List[dict]:
        """极点表：n, a_n, b_n, ε_n, Γ_n, 孤立度, 归一化残差"""
        return [{
            'n': entry.pole.index,
            'a_n_per_nm': entry.pole.a,
            'b_n_per_nm': entry.pole.b,
            'energy_mev': entry.pole.energy,
            'width_mev': entry.pole.width,
            'isolation_ratio': entry.isolation_ratio,
            'normalization_residual': entry.state.normalization_residual,
        } for entry in sorted(self.entries, key=lambda e: e.pole.index)]


def _try_refine(profile: PotentialProfile, seed: complex) -> Optional[ResonancePole]:
    try:
        return refine_pole(profile, seed)
    except (ConvergenceError, PhysicalDomainError) as e:
        log_warning(f"丢弃极点初值 {seed:.6g}: {e}")
        return None


def deduplicate(poles: Sequence[ResonancePole], distance: float = DEDUPLICATION_DISTANCE) -> List[ResonancePole]:
    """按 |Δk| < distance 去重，保留首次出现者"""
    unique: List[ResonancePole] = []
    for pole in poles:
        if all(abs(pole.k - other.k) >= distance for other in unique):
            unique.append(pole)
    return unique


def isolation_ratios(poles: Sequence[ResonancePole]) -> List[float]:
    """min_{m≠n} |ε_m - ε_n| / Γ_n，单个极点时为无穷大"""
    energies = np.array([p.energy for p in poles])
    ratios = []
    for i, pole in enumerate(poles):
        others = np.delete(energies, i)
        spacing = np.min(np.abs(others - pole.energy)) if others.size else np.inf
        ratios.append(float(spacing / pole.width))
    return ratios


def find_poles(profile: PotentialProfile, seed_scan: Tuple[float, float] = (10.0, 200.0), complex_scan: bool = True,
               k_max: float = 3.0, b_max: float = 0.6, workers: Optional[int] = None) -> List[ResonancePole]:
    """
    搜索第四象限极点：实轴峰与复平面网格给出初值，并行精化后去重

    Args:
        seed_scan: 实轴扫描能量区间（meV）
        complex_scan: 是否补充复平面网格初值
        k_max, b_max: 复平面扫描范围（nm⁻¹）
        workers: 并行精化线程数

    Returns:
        按 Re k 递增编号（n = 1, 2, ...）的极点
    """
    seeds = list(locate_pole_seeds(profile, seed_scan))
    if complex_scan:
        seeds += scan_complex_seeds(profile, k_max=k_max, b_max=b_max)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        refined = list(pool.map(lambda seed: _try_refine(profile, seed), seeds))

    unique = deduplicate([pole for pole in refined if pole is not None])
    return [replace(pole, index=n) for n, pole in enumerate(sorted(unique, key=lambda p: p.a), start=1)]


def family_from_poles(profile: PotentialProfile, poles: Sequence[ResonancePole], energy: float,
                      count: int = DEFAULT_POLE_COUNT) -> PoleFamily:
    """由已找到的极点按 |ε_n - E| 取最近的 count 个，并计算各自的 Gamow 态"""
    if not poles:
        log_warning("未找到任何共振极点")
        return PoleFamily(profile, energy, ())

    ratios = isolation_ratios(poles)
    order = sorted(range(len(poles)), key=lambda i: abs(poles[i].energy - energy))[:count]
    if len(order) < count:
        log_warning(f"只找到 {len(order)} 个极点，少于请求的 {count} 个")

    entries = tuple(PoleEntry(pole=poles[i], state=gamow_state(profile, poles[i]), isolation_ratio=ratios[i])
                    for i in order)
    family = PoleFamily(profile, energy, entries)
    for row in family.table():
        log_info(f"极点 n={row['n']}: k = {row['a_n_per_nm']:.9f} - {row['b_n_per_nm']:.3e}i nm⁻¹, "
                 f"ε = {row['energy_mev']:.4f} meV, Γ = {row['width_mev']:.4f} meV, "
                 f"孤立度 {row['isolation_ratio']:.1f}")
    return family


def build_pole_family(profile: PotentialProfile, energy: float, count: int = DEFAULT_POLE_COUNT,
                      seed_scan: Tuple[float, float] = (10.0, 200.0), complex_scan: bool = True,
                      k_max: float = 3.0, b_max: float = 0.6, workers: Optional[int] = None) -> PoleFamily:
    """
    构造截断极点族

    Args:
        energy: 入射能量（meV），用于排序
        count: 保留的第四象限极点数 N
        其余参数见 find_poles

    Returns:
        PoleFamily（至多 count 个条目，每个带镜像伙伴）
    """
    poles = find_poles(profile, seed_scan, complex_scan, k_max, b_max, workers)
    return family_from_poles(profile, poles, energy, count)
