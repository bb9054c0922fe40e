#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
复平面极点搜索

极点 k_n = a_n - i b_n 是 D(k) = M22(k) = 1/t(k) 的零点。
初值来自两处：实轴 |t(E)|² 的共振峰，以及第四象限网格上 log|D| 的局部极小。
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.optimize import newton
from scipy.signal import find_peaks, peak_widths
from skimage.feature import peak_local_max

from utils.errors import ConvergenceError, InvalidParameterError, PhysicalDomainError
from utils.global_manager import log_debug
from utils.potential import CONSTANTS, PhysicalConstants, PotentialProfile, wavenumber_from_energy
from utils.scattering import transfer_matrix, transmission_scan

# 牛顿迭代的中心差分步长（nm⁻¹）
DERIVATIVE_STEP = 1e-7
POLE_TOLERANCE = 1e-12
MAX_ITERATIONS = 100


@dataclass(frozen=True)
class ResonancePole:
    """
    共振极点

    Attributes:
        index: 序号 n（镜像伙伴为 -n）
        k: 复波数 k_n = a_n - i b_n（nm⁻¹）
        energy: 共振能量 ε_n（meV）
        width: 共振宽度 Γ_n（meV）
        mass_ratio: 有效质量比
        residual: |D(k_n)|
    """
    index: int
    k: complex
    energy: float
    width: float
    mass_ratio: float
    residual: float = 0.0
    constants: PhysicalConstants = field(default=CONSTANTS, repr=False)

    @classmethod
    def from_wavenumber(cls, index: int, k: complex, mass_ratio: float, residual: float = 0.0,
                        constants: PhysicalConstants = CONSTANTS) -> 'ResonancePole':
        """由 k_n 计算 ε_n = (ℏ²/2m)(a²-b²)、Γ_n = 4(ℏ²/2m)ab"""
        c2 = constants.hbar2_over_2m(mass_ratio)
        a, b = k.real, -k.imag
        return cls(index=index, k=complex(k), energy=c2 * (a * a - b * b), width=4.0 * c2 * a * b,
                   mass_ratio=mass_ratio, residual=residual, constants=constants)

    @property
    def a(self) -> float:
        return self.k.real

    @property
    def b(self) -> float:
        return -self.k.imag

    @property
    def complex_energy(self) -> complex:
        """E_n = ε_n - iΓ_n/2"""
        return self.energy - 0.5j * self.width

    @property
    def lifetime(self) -> float:
        """τ_l = ℏ/Γ（fs）"""
        return self.constants.hbar / self.width

    @property
    def front_speed(self) -> float:
        """共振前沿速度 ℏa_n/m（nm/ps）"""
        return 2.0 * self.constants.hbar_over_2m(self.mass_ratio) * abs(self.a) * 1000.0

    def mirror(self) -> 'ResonancePole':
        """第三象限镜像极点 k_{-n} = -k_n*"""
        return ResonancePole(index=-self.index, k=-self.k.conjugate(), energy=self.energy,
                             width=self.width, mass_ratio=self.mass_ratio, residual=self.residual,
                             constants=self.constants)


@dataclass(frozen=True)
class ResonancePeak:
    """实轴透射谱上的共振峰"""
    energy: float
    fwhm: float
    height: float


def denominator(profile: PotentialProfile, k):
    """D(k) = 1/t(k)"""
    return transfer_matrix(profile, k).denominator()


def resonance_peaks(profile: PotentialProfile, e_range: Tuple[float, float],
                    step: float = 0.02, prominence: float = 1e-3) -> List[ResonancePeak]:
    """
    扫描实轴 |t(E)|²，返回各局部极大及其半高全宽

    Args:
        e_range: 能量区间（meV）
        step: 扫描步长（meV）
        prominence: find_peaks 的显著度阈值
    """
    e_min, e_max = e_range
    if not 0 < e_min < e_max:
        raise InvalidParameterError(f"能量区间不合法: {e_range}")
    if profile.is_free:
        return []
    limit = 4.0 * float(profile.heights.max())
    if e_max > limit:
        raise InvalidParameterError(f"能量区间上限 {e_max} meV 超过最高势垒的 4 倍 ({limit} meV)")

    points = max(4001, int(np.ceil((e_max - e_min) / step)) + 1)
    energies = np.linspace(e_min, e_max, points)
    transmission, _ = transmission_scan(profile, energies)
    peaks, _ = find_peaks(transmission, prominence=prominence)
    if peaks.size == 0:
        return []

    widths, _, _, _ = peak_widths(transmission, peaks, rel_height=0.5)
    spacing = energies[1] - energies[0]
    return [ResonancePeak(energy=float(energies[p]), fwhm=float(w * spacing), height=float(transmission[p]))
            for p, w in zip(peaks, widths)]


def locate_pole_seeds(profile: PotentialProfile, e_range: Tuple[float, float]) -> List[complex]:
    """
    实轴共振峰给出的极点初值：seed = k(E_peak) - i·(半宽换算到 k)

    没有峰时返回空列表。
    """
    seeds = []
    c2 = profile.hbar2_over_2m
    for peak in resonance_peaks(profile, e_range):
        k_peak = wavenumber_from_energy(peak.energy, profile.mass_ratio, profile.constants)
        # dE/dk = 2(ℏ²/2m)k
        half_width_k = 0.5 * peak.fwhm / (2.0 * c2 * k_peak)
        seeds.append(complex(k_peak, -half_width_k))
    log_debug(f"实轴扫描得到 {len(seeds)} 个极点初值: {seeds}")
    return seeds


def scan_complex_seeds(profile: PotentialProfile, k_max: float = 3.0, b_max: float = 0.6,
                       n_re: int = 600, n_im: int = 240) -> List[complex]:
    """
    第四象限网格上 -log|D(k)| 的局部极大作为初值

    用于实轴扫描分辨不出的宽共振（势垒以上的极点族）。
    """
    if k_max <= 0 or b_max <= 0:
        raise InvalidParameterError("复平面扫描范围必须为正")
    re = np.linspace(k_max / n_re, k_max, n_re)
    im = np.linspace(-b_max, -b_max / n_im, n_im)
    grid = re[None, :] + 1j * im[:, None]
    with np.errstate(divide='ignore'):
        image = -np.log(np.abs(denominator(profile, grid)))
    image = np.nan_to_num(image, nan=-np.inf, posinf=np.finfo(float).max)

    coordinates = peak_local_max(image, min_distance=2, exclude_border=False)
    seeds = [complex(re[col], im[row]) for row, col in coordinates]
    log_debug(f"复平面扫描得到 {len(seeds)} 个极点初值")
    return seeds


def refine_root(profile: PotentialProfile, seed: complex, tol: float = POLE_TOLERANCE,
                maxiter: int = MAX_ITERATIONS) -> complex:
    """
    在 D(k) 上做牛顿迭代（中心差分导数）

    Raises:
        ConvergenceError: 迭代未收敛，携带最后一次迭代值
    """
    h = DERIVATIVE_STEP

    def func(k):
        return complex(denominator(profile, k))

    def fprime(k):
        return (func(k + h) - func(k - h)) / (2.0 * h)

    try:
        root, info = newton(func, complex(seed), fprime=fprime, tol=tol, maxiter=maxiter,
                            full_output=True, disp=False)
    except (ArithmeticError, ValueError) as e:
        raise ConvergenceError(f"极点迭代失败（初值 {seed}）: {e}", last_iterate=complex(seed)) from e

    root = complex(root)
    if not info.converged or not np.isfinite(root):
        raise ConvergenceError(f"极点迭代 {maxiter} 次未收敛（初值 {seed}）", last_iterate=root)
    return root


def refine_pole(profile: PotentialProfile, seed: complex, index: int = 1) -> ResonancePole:
    """
    由初值精化出第四象限极点

    Raises:
        ConvergenceError: 未收敛
        PhysicalDomainError: 收敛点不在第四象限
    """
    root = refine_root(profile, seed)
    if not (root.real > 0 and root.imag < 0):
        raise PhysicalDomainError(f"收敛点 {root} 不在第四象限（初值 {seed}）")
    residual = abs(complex(denominator(profile, root)))
    pole = ResonancePole.from_wavenumber(index, root, profile.mass_ratio, residual, profile.constants)
    log_debug(f"极点精化: 初值 {seed} -> {root}, ε = {pole.energy:.6f} meV, Γ = {pole.width:.6f} meV")
    return pole
