#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
单能级闭式密度与时间尺度

    |Ψ^i/φ|²  = 1 + e^{-Γt/ℏ} - 2e^{-Γt/2ℏ} cos(ω_n t)
    |Ψ^e/T_k|² = 1 + e^{-Γt/ℏ}e^{2b(x_f-L)} - 2e^{b(x_f-L)}e^{-Γt/2ℏ} cos[(a-k)(x_f-L) - (ε_n-E)t/ℏ]

ω_n = |E - ε_n|/ℏ；极大值约在 τ_m = (2m-1)πℏ/ΔE。外部区余弦的时间相位带符号：
共振下方入射（E < ε_n）时为 -ω_n t，上方为 +ω_n t，只有 x_f = L 处两者一致。
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from utils.errors import InvalidParameterError, OutOfValidityError
from utils.global_manager import log_info
from utils.potential import CONSTANTS, PhysicalConstants, wavenumber_from_energy
from utils.resonance import ResonancePole

ArrayLike = Union[float, np.ndarray]

BUILDUP_LIFETIMES = 10.0


def _finish(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


def internal_buildup_ratio(width: float, omega: float, t: ArrayLike,
                           constants: PhysicalConstants = CONSTANTS) -> ArrayLike:
    """
    内部区积累比 |Ψ^i/φ|²

    Args:
        width: Γ_n（meV）
        omega: ω_n（fs⁻¹）
        t: 时间（fs，≥ 0）
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise InvalidParameterError("时间不能为负")
    decay = np.exp(-0.5 * width * t / constants.hbar)
    return _finish(1.0 + decay ** 2 - 2.0 * decay * np.cos(omega * t))


def external_ratio_closed_form(pole: ResonancePole, energy: float, x_f: float, length: float, t: ArrayLike,
                               validity_factor: float = 1.0, force: bool = False) -> ArrayLike:
    """
    外部区闭式密度 |Ψ^e/T_k|²

    Args:
        pole: 参考极点
        energy: 入射能量（meV）
        x_f: 观测位置（nm，≥ L）
        length: 结构长度 L（nm）
        t: 时间（fs）
        validity_factor: 有效性阈值 t ≥ factor·m x_f/(ℏk) 的系数
        force: 为展示公式失效区域而强制求值

    Raises:
        OutOfValidityError: 存在早于阈值的时间且未设置 force
    """
    constants = pole.constants
    t = np.asarray(t, dtype=float)
    k = wavenumber_from_energy(energy, pole.mass_ratio, constants)
    speed = 2.0 * constants.hbar_over_2m(pole.mass_ratio) * k
    threshold = validity_factor * x_f / speed if speed > 0 else np.inf
    if not force and np.any(t < threshold):
        raise OutOfValidityError(f"闭式外部解仅在 t ≥ {threshold:.6g} fs 时有效", threshold_fs=float(threshold))

    detuning = (pole.energy - energy) / constants.hbar
    depth = x_f - length
    decay = np.exp(-0.5 * pole.width * t / constants.hbar)
    growth = np.exp(pole.b * depth)
    value = 1.0 + (decay * growth) ** 2 - 2.0 * growth * decay * np.cos((pole.a - k) * depth - detuning * t)
    return _finish(value)


@dataclass(frozen=True)
class TimeScales:
    """
    时间尺度（fs）

    Attributes:
        omega: ω_n（fs⁻¹）
        tau_m: 积累振荡极大时刻 τ_1..τ_M；共振入射时为空
        tau_r: 响应时间 τ_r = τ_1；共振入射时为 None
        tau_l: 寿命 ℏ/Γ
        tau_b: 积累时间 10τ_l
        crossover: ΔE > πΓ（等价于 τ_r < τ_l）
        delta_e: ΔE（meV）
        width: Γ（meV）
    """
    omega: float
    tau_m: List[float]
    tau_r: Optional[float]
    tau_l: float
    tau_b: float
    crossover: bool
    delta_e: float
    width: float

    @classmethod
    def from_widths(cls, delta_e: float, width: float, count: int = 3,
                    constants: PhysicalConstants = CONSTANTS) -> 'TimeScales':
        """由 ΔE 与 Γ 直接计算"""
        if width <= 0:
            raise InvalidParameterError(f"共振宽度必须为正: {width}")
        if delta_e < 0:
            raise InvalidParameterError(f"ΔE 不能为负: {delta_e}")
        hbar = constants.hbar
        tau_l = hbar / width
        if delta_e == 0:
            log_info("共振入射：τ_r 无定义，响应由寿命决定")
            return cls(omega=0.0, tau_m=[], tau_r=None, tau_l=tau_l, tau_b=BUILDUP_LIFETIMES * tau_l,
                       crossover=False, delta_e=0.0, width=width)
        tau_m = [(2 * m - 1) * np.pi * hbar / delta_e for m in range(1, count + 1)]
        tau_r = np.pi * hbar / delta_e
        return cls(omega=delta_e / hbar, tau_m=tau_m, tau_r=tau_r, tau_l=tau_l,
                   tau_b=BUILDUP_LIFETIMES * tau_l, crossover=bool(tau_r < tau_l), delta_e=delta_e, width=width)

    def to_dict(self) -> dict:
        return {
            'omega_per_fs': self.omega,
            'tau_m_fs': list(self.tau_m),
            'tau_r_fs': self.tau_r,
            'tau_l_fs': self.tau_l,
            'tau_b_fs': self.tau_b,
            'crossover': self.crossover,
            'delta_e_mev': self.delta_e,
            'width_mev': self.width,
        }


def time_scales(pole: ResonancePole, energy: float, count: int = 3) -> TimeScales:
    """由极点与入射能量给出 TimeScales"""
    return TimeScales.from_widths(abs(energy - pole.energy), pole.width, count, pole.constants)


def buildup_cycle_count(energy: float, pole: ResonancePole, t: ArrayLike) -> Optional[ArrayLike]:
    """
    已完成的积累周期数 t/(2πℏ/ΔE)；共振入射返回 None
    """
    delta_e = abs(energy - pole.energy)
    if delta_e == 0:
        return None
    return _finish(np.asarray(t, dtype=float) * delta_e / (2.0 * np.pi * pole.constants.hbar))


def empirical_buildup_time(width: float, omega: float, tolerance: float = 0.05, horizon_lifetimes: float = 40.0,
                           samples: int = 200001, constants: PhysicalConstants = CONSTANTS) -> float:
    """
    内部区积累比最后一次离开 1 ± tolerance 区间的时刻（fs）

    与 τ_b = 10τ_l 对照报告。
    """
    tau_l = constants.hbar / width
    t = np.linspace(0.0, horizon_lifetimes * tau_l, samples)
    ratio = np.asarray(internal_buildup_ratio(width, omega, t, constants))
    outside = np.nonzero(np.abs(ratio - 1.0) > tolerance)[0]
    if outside.size == 0:
        return 0.0
    return float(t[min(outside[-1] + 1, samples - 1)])


@dataclass(frozen=True)
class CrossoverRow:
    """ΔE 扫描的一行"""
    multiple: float
    delta_e: float
    tau_r: float
    tau_l: float
    crossover: bool


def crossover_sweep(pole: ResonancePole, multiples: Sequence[float]) -> List[CrossoverRow]:
    """对 ΔE = 倍数·Γ 扫描，比较 τ_r 与 τ_l"""
    rows = []
    for multiple in multiples:
        if multiple <= 0:
            raise InvalidParameterError(f"ΔE 倍数必须为正: {multiple}")
        scales = TimeScales.from_widths(multiple * pole.width, pole.width, 1, pole.constants)
        rows.append(CrossoverRow(multiple=float(multiple), delta_e=scales.delta_e, tau_r=scales.tau_r,
                                 tau_l=scales.tau_l, crossover=scales.crossover))
    return rows
