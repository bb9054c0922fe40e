#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
传递矩阵法求解分段常数势的定态散射问题

约定：x < 0 区入射 e^{ikx}，反射 r·e^{-ikx}；x > L 区透射 t·e^{ikx}。
传递矩阵 M 把左侧平面波系数 (A, B) 映射为右侧系数 (C, D)，
于是 t = 1/M22，r = -M21/M22。

段内用 (ψ, ψ') 的传播矩阵
    [[cos κd, sin(κd)/κ], [-κ sin κd, cos κd]]
它只依赖 κ²，因此与 κ 的分支选择无关。
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from utils.errors import SingularInputError
from utils.potential import PotentialProfile, wavenumber_from_energy

ComplexLike = Union[complex, np.ndarray]

# |κd| 低于该值时 sin(κd)/κ 用级数展开
_SINC_SERIES_LIMIT = 1e-3

# det M 舍入误差界的常数因子，乘以 (段数 + 3)
_DETERMINANT_ERROR_FACTOR = 8.0


def _segment_kappa2(profile: PotentialProfile, k: np.ndarray) -> np.ndarray:
    """各段 κ² = k² - V/(ℏ²/2m)，形状 (段数, *k.shape)"""
    heights = profile.heights.reshape((-1,) + (1,) * k.ndim)
    return k ** 2 - heights / profile.hbar2_over_2m


def _scaled_propagator(kappa2: np.ndarray, width: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray,
                                                                np.ndarray, np.ndarray]:
    """
    单段传播矩阵的缩放形式

    Returns:
        (p11, p12, p21, p22, log_scale)，真实矩阵 = exp(log_scale)·p
    """
    kappa = np.sqrt(kappa2.astype(complex))
    phase = kappa * width
    log_scale = np.abs(phase.imag)
    ep = np.exp(1j * phase - log_scale)
    em = np.exp(-1j * phase - log_scale)
    cos_s = 0.5 * (ep + em)
    sin_s = (ep - em) / 2j

    small = np.abs(phase) < _SINC_SERIES_LIMIT
    with np.errstate(divide='ignore', invalid='ignore'):
        sin_over_kappa = np.where(small, 0.0, sin_s / np.where(small, 1.0, kappa))
    series = width * (1.0 - phase ** 2 / 6.0 + phase ** 4 / 120.0) * np.exp(-log_scale)
    sin_over_kappa = np.where(small, series, sin_over_kappa)

    return cos_s, sin_over_kappa, -kappa * sin_s, cos_s, log_scale


def propagate_value_derivative(profile: PotentialProfile, k: complex, x: np.ndarray,
                               psi0: complex, dpsi0: complex) -> Tuple[np.ndarray, np.ndarray]:
    """
    从 x = 0 处的 (ψ, ψ') 出发，在 [0, L] 内求 ψ(x) 与 ψ'(x)

    Args:
        profile: 势
        k: 波数（可为复数）
        x: 位置数组，需落在 [0, L] 内
        psi0, dpsi0: x = 0 处的函数值与导数

    Returns:
        (ψ(x), ψ'(x))
    """
    x = np.asarray(x, dtype=float)
    psi = np.zeros(x.shape, dtype=complex)
    dpsi = np.zeros(x.shape, dtype=complex)
    edges = profile.boundaries
    kappa2_all = _segment_kappa2(profile, np.asarray(k, dtype=complex))

    state = (complex(psi0), complex(dpsi0))
    for index, segment in enumerate(profile.segments):
        start, stop = edges[index], edges[index + 1]
        last = index == len(profile.segments) - 1
        mask = (x >= start) & ((x <= stop) if last else (x < stop))
        kappa2 = kappa2_all[index]
        if np.any(mask):
            offsets = x[mask] - start
            p11, p12, p21, p22, scale = _scaled_propagator(kappa2 * np.ones_like(offsets, dtype=complex), offsets)
            factor = np.exp(scale)
            psi[mask] = factor * (p11 * state[0] + p12 * state[1])
            dpsi[mask] = factor * (p21 * state[0] + p22 * state[1])
        p11, p12, p21, p22, scale = _scaled_propagator(np.asarray(kappa2), segment.width)
        factor = np.exp(scale)
        state = (complex(factor * (p11 * state[0] + p12 * state[1])),
                 complex(factor * (p21 * state[0] + p22 * state[1])))
    return psi, dpsi


@dataclass(frozen=True)
class TransferMatrix:
    """
    传递矩阵（缩放存储）

    真实矩阵为 exp(log_scale)·[[m11, m12], [m21, m22]]；各元素可以是与 k 同形状的数组。
    log_growth 是逐段传播矩阵与边界换基矩阵无穷范数乘积的对数，用于估计舍入误差。
    """
    k: ComplexLike
    m11: ComplexLike
    m12: ComplexLike
    m21: ComplexLike
    m22: ComplexLike
    log_scale: Union[float, np.ndarray]
    log_growth: Union[float, np.ndarray] = 0.0
    segment_count: int = 0

    @property
    def matrix(self) -> np.ndarray:
        """未缩放的 2×2 矩阵（仅标量 k）"""
        scale = np.exp(self.log_scale)
        return scale * np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    def determinant(self) -> ComplexLike:
        return np.exp(2.0 * self.log_scale) * (self.m11 * self.m22 - self.m12 * self.m21)

    def determinant_tolerance(self) -> Union[float, np.ndarray]:
        """
        determinant() 与 1 之差的舍入误差界 c·ε·G²

        G = exp(log_growth)。元素由 G 量级的项相消得到，行列式的绝对误差随 G² 增长，
        势垒内衰减长度短、k 很小或 Im k 较大时可远大于 1e-10。
        """
        factor = _DETERMINANT_ERROR_FACTOR * (self.segment_count + 3)
        return factor * np.finfo(float).eps * np.exp(2.0 * self.log_growth)

    def denominator(self) -> ComplexLike:
        """D(k) = M22 = 1/t(k)，极点即 D 的零点"""
        return np.exp(self.log_scale) * self.m22

    def transmission(self) -> ComplexLike:
        return np.exp(-self.log_scale) / self.m22

    def reflection(self) -> ComplexLike:
        return -self.m21 / self.m22


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """透射与反射振幅"""
    k: ComplexLike
    t: ComplexLike
    r: ComplexLike

    @property
    def transmission_probability(self):
        return np.abs(self.t) ** 2

    @property
    def reflection_probability(self):
        return np.abs(self.r) ** 2


def transfer_matrix(profile: PotentialProfile, k: ComplexLike) -> TransferMatrix:
    """
    计算传递矩阵，可对 k 数组向量化

    Raises:
        SingularInputError: k = 0
    """
    k_arr = np.asarray(k, dtype=complex)
    if np.any(k_arr == 0):
        raise SingularInputError("k = 0 处传递矩阵奇异")

    kappa2 = _segment_kappa2(profile, k_arr)
    t11 = np.ones(k_arr.shape, dtype=complex)
    t12 = np.zeros(k_arr.shape, dtype=complex)
    t21 = np.zeros(k_arr.shape, dtype=complex)
    t22 = np.ones(k_arr.shape, dtype=complex)
    log_scale = np.zeros(k_arr.shape)
    log_growth = np.zeros(k_arr.shape)

    # 左乘：P_total = P_n ... P_1
    for index, segment in enumerate(profile.segments):
        p11, p12, p21, p22, scale = _scaled_propagator(kappa2[index], segment.width)
        t11, t12, t21, t22 = (p11 * t11 + p12 * t21, p11 * t12 + p12 * t22,
                              p21 * t11 + p22 * t21, p21 * t12 + p22 * t22)
        log_scale = log_scale + scale
        row_norm = np.maximum(np.abs(p11) + np.abs(p12), np.abs(p21) + np.abs(p22))
        log_growth = log_growth + scale + np.log(row_norm)

    length = profile.length
    e_minus = np.exp(-1j * k_arr * length) / 2.0
    e_plus = np.exp(1j * k_arr * length) / 2.0
    ik = 1j * k_arr
    m11 = e_minus * (t11 + t22 + ik * t12 + t21 / ik)
    m12 = e_minus * (t11 - t22 - ik * t12 + t21 / ik)
    m21 = e_plus * (t11 - t22 + ik * t12 - t21 / ik)
    m22 = e_plus * (t11 + t22 - ik * t12 - t21 / ik)

    # ‖C_R⁻¹‖·‖C_L‖，C_L = [[1, 1], [ik, -ik]]
    abs_k = np.abs(k_arr)
    log_growth = (log_growth + np.abs(k_arr.imag) * length + np.log((1.0 + abs_k) / (2.0 * abs_k))
                  + np.log(np.maximum(2.0, 2.0 * abs_k)))
    count = len(profile.segments)

    if k_arr.ndim == 0:
        return TransferMatrix(complex(k_arr), complex(m11), complex(m12), complex(m21), complex(m22),
                              float(log_scale), float(log_growth), count)
    return TransferMatrix(k_arr, m11, m12, m21, m22, log_scale, log_growth, count)


def scattering_amplitudes(profile: PotentialProfile, k: ComplexLike) -> ScatteringAmplitudes:
    """从传递矩阵提取 (t, r)"""
    matrix = transfer_matrix(profile, k)
    return ScatteringAmplitudes(k=matrix.k, t=matrix.transmission(), r=matrix.reflection())


def stationary_wave(profile: PotentialProfile, k: float, x) -> np.ndarray:
    """
    定态散射波函数 φ(x, k)

    x < 0 返回 e^{ikx} + r·e^{-ikx}，x > L 返回 t·e^{ikx}，
    结构内部由 x = 0 处的 (1 + r, ik(1 - r)) 逐段传播得到。k 可取负值（φ_{-k}）。
    """
    x = np.asarray(x, dtype=float)
    amplitudes = scattering_amplitudes(profile, k)
    t, r = amplitudes.t, amplitudes.r
    length = profile.length

    values = np.empty(x.shape, dtype=complex)
    left = x < 0
    right = x > length
    inside = ~(left | right)
    values[left] = np.exp(1j * k * x[left]) + r * np.exp(-1j * k * x[left])
    values[right] = t * np.exp(1j * k * x[right])
    if np.any(inside):
        psi, _ = propagate_value_derivative(profile, k, x[inside], 1.0 + r, 1j * k * (1.0 - r))
        values[inside] = psi
    return values if values.ndim else values.item()


def transmission_scan(profile: PotentialProfile, energies) -> Tuple[np.ndarray, np.ndarray]:
    """
    实轴能量扫描

    Args:
        energies: 能量数组（meV，须为正）

    Returns:
        (|t|², |r|²)
    """
    energies = np.asarray(energies, dtype=float)
    k = np.asarray(wavenumber_from_energy(energies, profile.mass_ratio, profile.constants))
    amplitudes = scattering_amplitudes(profile, k)
    return np.abs(amplitudes.t) ** 2, np.abs(amplitudes.r) ** 2

