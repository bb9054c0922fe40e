#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
单位制、物理常数与分段常数势

单位约定：长度 nm，时间 fs（输出时换算为 ps），能量 meV。
"""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

import numpy as np

from utils.errors import InvalidParameterError, PhysicalDomainError
from utils.global_manager import log_warning

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class PhysicalConstants:
    """物理常数（meV·fs·nm 单位制）"""
    hbar: float = 658.2119569           # meV·fs
    hbar2_over_2me: float = 38.0998     # meV·nm²，自由电子

    def __post_init__(self):
        if self.hbar <= 0 or self.hbar2_over_2me <= 0:
            raise InvalidParameterError("物理常数必须为正")

    def hbar2_over_2m(self, mass_ratio: float) -> float:
        """有效质量 μ·mₑ 下的 ℏ²/2m（meV·nm²）"""
        if mass_ratio <= 0:
            raise InvalidParameterError(f"有效质量比必须为正: {mass_ratio}")
        return self.hbar2_over_2me / mass_ratio

    def hbar_over_2m(self, mass_ratio: float) -> float:
        """ℏ/2m（nm²/fs），Moshinsky 参数与群速度都用到它"""
        return self.hbar2_over_2m(mass_ratio) / self.hbar


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class Segment:
    """势的一段：宽度（nm）与高度（meV）"""
    width: float
    height: float


@dataclass(frozen=True)
class PotentialProfile:
    """
    [0, L] 上的分段常数势，区间外势为零

    Attributes:
        segments: 从左到右的势段
        mass_ratio: 有效质量比 μ（两侧渐近区相同）
        constants: 物理常数
    """
    segments: Tuple[Segment, ...]
    mass_ratio: float
    constants: PhysicalConstants = field(default=CONSTANTS)

    def __post_init__(self):
        if not self.segments:
            raise InvalidParameterError("势至少需要一段")
        if self.mass_ratio <= 0:
            raise InvalidParameterError(f"有效质量比必须为正: {self.mass_ratio}")
        for index, segment in enumerate(self.segments):
            if not segment.width > 0:
                raise InvalidParameterError(f"第 {index} 段宽度必须为正: {segment.width}")
            if segment.height < 0:
                raise InvalidParameterError(f"第 {index} 段势高不能为负: {segment.height}")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[float, float]], mass_ratio: float,
                   constants: PhysicalConstants = CONSTANTS) -> 'PotentialProfile':
        """由 (宽度, 高度) 序列构造"""
        segments = tuple(Segment(float(w), float(h)) for w, h in pairs)
        return cls(segments=segments, mass_ratio=float(mass_ratio), constants=constants)

    @property
    def length(self) -> float:
        """结构总长 L（nm）"""
        return float(sum(segment.width for segment in self.segments))

    @property
    def boundaries(self) -> np.ndarray:
        """各段边界坐标，首元素 0，末元素 L"""
        return np.concatenate(([0.0], np.cumsum([segment.width for segment in self.segments])))

    @property
    def heights(self) -> np.ndarray:
        return np.array([segment.height for segment in self.segments])

    @property
    def is_free(self) -> bool:
        """所有势段高度均为零"""
        return bool(np.all(self.heights == 0.0))

    @property
    def hbar2_over_2m(self) -> float:
        return self.constants.hbar2_over_2m(self.mass_ratio)

    @property
    def hbar_over_2m(self) -> float:
        return self.constants.hbar_over_2m(self.mass_ratio)

    def reversed(self) -> 'PotentialProfile':
        """空间反演后的势"""
        return PotentialProfile(tuple(reversed(self.segments)), self.mass_ratio, self.constants)

    def potential_at(self, x: ArrayLike) -> np.ndarray:
        """
        在任意位置求势（meV）

        段内取该段高度；恰好落在界面上的点（含 0 与 L）取两侧平均值，
        供有限差分网格使用。
        """
        x = np.asarray(x, dtype=float)
        edges = self.boundaries
        padded = np.concatenate(([0.0], self.heights, [0.0]))
        right = padded[np.searchsorted(edges, x, side='right')]
        left = padded[np.searchsorted(edges, x, side='left')]
        return 0.5 * (left + right)

    def describe(self) -> List[dict]:
        """用于运行清单的可序列化描述"""
        return [{'width_nm': s.width, 'height_mev': s.height} for s in self.segments]


def build_double_barrier(barrier_height: float, barrier_width: float, well_width: float,
                         mass_ratio: float, constants: PhysicalConstants = CONSTANTS) -> PotentialProfile:
    """
    构造对称双势垒结构 [势垒, 势阱, 势垒]

    Args:
        barrier_height: 势垒高度（meV），零高度得到自由粒子势（允许，但记录警告）
        barrier_width: 势垒宽度（nm）
        well_width: 势阱宽度（nm）
        mass_ratio: 有效质量比

    Returns:
        PotentialProfile，L = 2·barrier_width + well_width

    Raises:
        InvalidParameterError: 尺寸非正或势垒为负
    """
    if barrier_width <= 0 or well_width <= 0:
        raise InvalidParameterError(f"势垒与势阱宽度必须为正: {barrier_width}, {well_width}")
    if barrier_height < 0:
        raise InvalidParameterError(f"势垒高度不能为负: {barrier_height}")
    if barrier_height == 0:
        log_warning("势垒高度为 0，结构退化为自由粒子（无势垒）")

    return PotentialProfile.from_pairs(
        [(barrier_width, barrier_height), (well_width, 0.0), (barrier_width, barrier_height)],
        mass_ratio, constants)


def wavenumber_from_energy(energy: ArrayLike, mass_ratio: float,
                           constants: PhysicalConstants = CONSTANTS) -> ArrayLike:
    """
    k = sqrt(E / (ℏ²/2m))，单位 nm⁻¹

    Raises:
        PhysicalDomainError: E < 0
    """
    energy_arr = np.asarray(energy, dtype=float)
    if np.any(energy_arr < 0):
        raise PhysicalDomainError(f"能量不能为负: {energy}")
    k = np.sqrt(energy_arr / constants.hbar2_over_2m(mass_ratio))
    return float(k) if k.ndim == 0 else k


def energy_from_wavenumber(k: ArrayLike, mass_ratio: float,
                           constants: PhysicalConstants = CONSTANTS) -> ArrayLike:
    """E = (ℏ²/2m)·k²，单位 meV"""
    energy = constants.hbar2_over_2m(mass_ratio) * np.square(np.asarray(k))
    return energy.item() if np.ndim(energy) == 0 else energy


def classical_speed(energy: ArrayLike, mass_ratio: float,
                    constants: PhysicalConstants = CONSTANTS) -> ArrayLike:
    """
    经典速度 v = (2E/m)^{1/2} = ℏk/m，单位 nm/ps

    Raises:
        PhysicalDomainError: E < 0
    """
    k = np.asarray(wavenumber_from_energy(energy, mass_ratio, constants))
    speed = 2.0 * constants.hbar_over_2m(mass_ratio) * k * 1000.0
    return float(speed) if speed.ndim == 0 else speed
