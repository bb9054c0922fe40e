#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Crank–Nicolson 网格演化

独立于解析解的数值基准：在 [x_min, x_max] 上以硬墙边界传播快门初态，
并在有效时间窗内与解析解比较。

    (1 + iΔt H/2ℏ) Ψ^{n+1} = (1 - iΔt H/2ℏ) Ψ^n,   H = -(ℏ²/2m)∂² + V(x)
"""

import time
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import psutil
from scipy.sparse import diags
from scipy.sparse.linalg import splu

from utils.errors import InvalidParameterError, NumericalError, OutOfValidityError
from utils.global_manager import log_debug, log_info, log_warning
from utils.potential import PotentialProfile, classical_speed, wavenumber_from_energy
from utils.resonance import PoleFamily
from utils.transient import WaveSnapshot, psi_external, psi_internal, relative_l2_error

COMPARISON_MARGIN = 300.0   # nm，比较区为 [0, L + margin]
BYTES_PER_POINT = 16 * 12   # 复数数组、三对角矩阵与 LU 因子的粗略总和
MEMORY_FRACTION = 0.5


@dataclass(frozen=True)
class GridSpec:
    """
    均匀网格与时间步

    Attributes:
        x_min: 左墙位置（nm，须为 dx 的整数倍，使 x = 0 落在格点上）
        x_max: 右墙位置（nm）
        dx: 空间步长（nm）
        dt: 时间步长（fs）
        t_end: 演化终止时刻（fs）
    """
    x_min: float = -3000.0
    x_max: float = 2000.0
    dx: float = 0.05
    dt: float = 0.1
    t_end: float = 2000.0

    @property
    def points(self) -> int:
        return int(round((self.x_max - self.x_min) / self.dx)) + 1

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.points)

    def stability_ratio(self, profile: PotentialProfile) -> float:
        """Δt·(ℏ/2m)/Δx²（无量纲，仅作精度参考，格式本身无条件稳定）"""
        return self.dt * profile.hbar_over_2m / self.dx ** 2

    def validate(self, profile: PotentialProfile) -> None:
        """
        Raises:
            InvalidParameterError: 网格与势不相容
        """
        if not (self.dx > 0 and self.dt > 0):
            raise InvalidParameterError(f"步长必须为正: dx={self.dx}, dt={self.dt}")
        if self.t_end < 0:
            raise InvalidParameterError(f"终止时刻不能为负: {self.t_end}")
        if not (self.x_min < 0 < profile.length < self.x_max):
            raise InvalidParameterError(
                f"网格须满足 x_min < 0 < L < x_max: [{self.x_min}, {self.x_max}], L = {profile.length}")
        offset = self.x_min / self.dx
        if abs(offset - round(offset)) > 1e-6:
            raise InvalidParameterError(f"x_min = {self.x_min} 不是 dx = {self.dx} 的整数倍")


@dataclass(frozen=True)
class GridState:
    """
    网格上的波函数

    Attributes:
        grid: 网格
        psi: 复波函数（两端墙上恒为 0）
        t: 时刻（fs）
        norm: Σ|Ψ|²Δx
    """
    grid: GridSpec
    psi: np.ndarray
    t: float
    norm: float

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @classmethod
    def from_values(cls, grid: GridSpec, psi: np.ndarray, t: float = 0.0) -> 'GridState':
        psi = np.asarray(psi, dtype=complex).copy()
        if psi.shape != (grid.points,):
            raise InvalidParameterError(f"波函数长度 {psi.shape} 与网格点数 {grid.points} 不符")
        psi[0] = psi[-1] = 0.0
        return cls(grid=grid, psi=psi, t=float(t), norm=_grid_norm(psi, grid.dx))


def _grid_norm(psi: np.ndarray, dx: float) -> float:
    return float(np.sum(np.abs(psi) ** 2) * dx)


def align_left_wall(grid: GridSpec, k: float) -> GridSpec:
    """
    把左墙移到最接近 sin(kx) 节点的格点上

    被截断的正弦列因此是带墙自由问题的驻波，截断误差只经由有效时间窗体现。
    """
    if k <= 0:
        raise InvalidParameterError(f"入射波数必须为正: {k}")
    start = np.floor(grid.x_min / grid.dx) * grid.dx
    span = int(np.ceil(np.pi / (k * grid.dx))) + 1
    candidates = start + grid.dx * np.arange(span + 1)
    best = candidates[np.argmin(np.abs(np.sin(k * candidates)))]
    log_debug(f"左墙对齐: {grid.x_min} → {best:.6f} nm，|sin(kx)| = {abs(np.sin(k * best)):.3e}")
    return replace(grid, x_min=float(best))


def initialize_shutter_state(grid: GridSpec, k: float) -> GridState:
    """快门初态 Ψ(x, 0) = 2i sin(kx)（x < 0），x ≥ 0 处为 0"""
    x = grid.x
    psi = np.where(x < 0, 2j * np.sin(k * x), 0.0 + 0.0j)
    return GridState.from_values(grid, psi, 0.0)


def validity_horizon(grid: GridSpec, energy: float, region_end: float, mass_ratio: float,
                     region_start: float = 0.0) -> float:
    """
    墙反射重新进入比较区 [region_start, region_end] 之前的最晚时刻（fs）

    取两侧墙到比较区距离与经典速度之比的较小者。
    """
    speed = classical_speed(energy, mass_ratio) / 1000.0  # nm/fs
    if speed == 0:
        return float('inf')
    left = (region_start - grid.x_min) / speed
    right = (grid.x_max - region_end) / speed
    return float(max(0.0, min(left, right)))


def _check_memory(grid: GridSpec) -> None:
    required = grid.points * BYTES_PER_POINT
    available = psutil.virtual_memory().available
    if required > MEMORY_FRACTION * available:
        raise NumericalError(
            f"网格需要约 {required / 2 ** 20:.0f} MiB，超过可用内存 {available / 2 ** 20:.0f} MiB 的一半")


@lru_cache(maxsize=4)
def _factorize(profile: PotentialProfile, grid: GridSpec):
    """内部点上的 (右端矩阵, 左端 LU)，墙点不参与求解"""
    interior = grid.x[1:-1]
    n = interior.size
    c2 = profile.hbar2_over_2m
    potential = profile.potential_at(interior)
    off = np.full(n - 1, -c2 / grid.dx ** 2)
    main = 2.0 * c2 / grid.dx ** 2 + potential
    factor = 0.5j * grid.dt / profile.constants.hbar
    hamiltonian = diags([off, main, off], [-1, 0, 1], format='csc')
    identity = diags([np.ones(n)], [0], format='csc')
    try:
        lu = splu((identity + factor * hamiltonian).tocsc())
    except RuntimeError as e:
        raise NumericalError(f"Crank–Nicolson 矩阵分解失败: {e}") from e
    return (identity - factor * hamiltonian).tocsr(), lu


class CrankNicolsonPropagator:
    """Crank–Nicolson 传播器"""

    def __init__(self, profile: PotentialProfile, grid: GridSpec):
        grid.validate(profile)
        _check_memory(grid)
        self.profile = profile
        self.grid = grid
        self._rhs, self._lu = _factorize(profile, grid)

    def step(self, psi: np.ndarray) -> np.ndarray:
        """推进一个时间步（返回新数组）"""
        out = np.zeros_like(psi)
        out[1:-1] = self._lu.solve(self._rhs @ psi[1:-1])
        return out

    def run(self, state: GridState, steps: int) -> GridState:
        if steps < 0:
            raise InvalidParameterError(f"步数不能为负: {steps}")
        if state.grid != self.grid:
            raise InvalidParameterError("状态网格与传播器网格不一致")
        psi = state.psi
        for _ in range(steps):
            psi = self.step(psi)
        if not np.all(np.isfinite(psi)):
            raise NumericalError("Crank–Nicolson 演化出现非有限值")
        return GridState(grid=self.grid, psi=psi, t=state.t + steps * self.grid.dt,
                         norm=_grid_norm(psi, self.grid.dx))


def evolve(state: GridState, profile: PotentialProfile, steps: int) -> GridState:
    """把网格态推进 steps 个时间步"""
    return CrankNicolsonPropagator(profile, state.grid).run(state, steps)


@dataclass
class OracleReport:
    """
    网格解与解析解的比较结果

    Attributes:
        times: 比较时刻（fs）
        errors: 各时刻的相对 L2 误差
        horizon: 有效时间窗（fs）
        norm_drift: 网格范数相对漂移
        stability_ratio: Δt·(ℏ/2m)/Δx²
        grid: 实际使用的网格（左墙已对齐）
        snapshots: 各时刻比较区内的网格波函数
    """
    times: List[float]
    errors: List[float]
    horizon: float
    norm_drift: float
    stability_ratio: float
    grid: GridSpec
    snapshots: List[WaveSnapshot] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def max_error(self) -> float:
        return max(self.errors) if self.errors else 0.0

    def to_dict(self) -> Dict:
        return {
            'times_fs': list(self.times),
            'relative_l2_errors': list(self.errors),
            'max_relative_l2_error': self.max_error,
            'validity_horizon_fs': self.horizon,
            'norm_drift': self.norm_drift,
            'stability_ratio': self.stability_ratio,
            'grid': {'x_min_nm': self.grid.x_min, 'x_max_nm': self.grid.x_max,
                     'dx_nm': self.grid.dx, 'dt_fs': self.grid.dt},
            'elapsed_s': self.elapsed,
        }


def analytic_on_grid(profile: PotentialProfile, poles: PoleFamily, energy: float, x: np.ndarray, t: float,
                     count: Optional[int] = None, tail_closure: bool = True) -> np.ndarray:
    """[0, ∞) 上的解析波函数，内部区与外部区分别求值"""
    x = np.asarray(x, dtype=float)
    inside = x <= profile.length
    psi = np.empty(x.shape, dtype=complex)
    if np.any(inside):
        psi[inside] = psi_internal(profile, poles, energy, x[inside], t, count, tail_closure)
    if np.any(~inside):
        psi[~inside] = psi_external(profile, poles, energy, x[~inside], t, count, tail_closure)
    return psi


def compare_with_analytic(profile: PotentialProfile, poles: PoleFamily, energy: float, times: Sequence[float],
                          grid: GridSpec = GridSpec(), margin: float = COMPARISON_MARGIN,
                          count: Optional[int] = None, tail_closure: bool = True) -> OracleReport:
    """
    在 [0, L + margin] 上比较网格解与解析解

    Raises:
        OutOfValidityError: 某个比较时刻超出有效时间窗
        InvalidParameterError: 比较时刻不是 dt 的整数倍
    """
    started = time.perf_counter()
    k = wavenumber_from_energy(energy, profile.mass_ratio, profile.constants)
    grid = align_left_wall(grid, k)
    grid.validate(profile)
    region_end = profile.length + margin
    if region_end >= grid.x_max:
        raise InvalidParameterError(f"比较区终点 {region_end} nm 超出网格右墙 {grid.x_max} nm")
    horizon = validity_horizon(grid, energy, region_end, profile.mass_ratio)

    times = sorted(float(t) for t in times)
    late = [t for t in times if t > horizon]
    if late:
        raise OutOfValidityError(f"比较时刻 {late} fs 超出有效时间窗 {horizon:.1f} fs", threshold_fs=horizon)

    steps_at: List[Tuple[float, int]] = []
    for t in times:
        steps = int(round(t / grid.dt))
        if abs(steps * grid.dt - t) > 1e-9 * max(1.0, t):
            raise InvalidParameterError(f"比较时刻 {t} fs 不是 dt = {grid.dt} fs 的整数倍")
        steps_at.append((t, steps))

    propagator = CrankNicolsonPropagator(profile, grid)
    state = initialize_shutter_state(grid, k)
    initial_norm = state.norm
    x = grid.x
    window = (x >= 0) & (x <= region_end)
    log_info(f"Crank–Nicolson 基准: {grid.points} 个格点，Δt = {grid.dt} fs，"
             f"稳定比 {grid.stability_ratio(profile):.3g}，有效时间窗 {horizon:.1f} fs")

    errors, snapshots, done = [], [], 0
    for t, steps in steps_at:
        state = propagator.run(state, steps - done)
        done = steps
        reference = analytic_on_grid(profile, poles, energy, x[window], t, count, tail_closure)
        error = relative_l2_error(reference, state.psi[window])
        errors.append(error)
        snapshots.append(WaveSnapshot(t=t, x=x[window], psi=state.psi[window].copy(), reference=1.0 + 0j,
                                      region='oracle'))
        log_info(f"t = {t:.1f} fs 相对 L2 误差 {error:.3e}")

    drift = abs(state.norm / initial_norm - 1.0)
    if drift > 1e-8:
        log_warning(f"网格范数漂移 {drift:.3e} 偏大")
    return OracleReport(times=times, errors=errors, horizon=horizon, norm_drift=drift,
                        stability_ratio=grid.stability_ratio(profile), grid=grid, snapshots=snapshots,
                        elapsed=time.perf_counter() - started)
