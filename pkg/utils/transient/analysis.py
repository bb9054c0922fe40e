#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
快照与时间序列的后处理：波前定位与脉冲极大定位
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.signal import find_peaks

from utils.errors import InvalidParameterError
from utils.global_manager import log_info

from .solutions import TimeTrace, WaveSnapshot

SENSITIVITY_THRESHOLDS = (0.05, 0.1, 0.2)


@dataclass(frozen=True)
class WavefrontReport:
    """
    波前定位结果

    Attributes:
        position: 阈值处的波前位置（nm）
        threshold: 使用的相对阈值
        plateau_mean: 波前后方平台区的平均密度
        sensitivity: 各阈值对应的波前位置
    """
    position: float
    threshold: float
    plateau_mean: float
    sensitivity: Dict[float, float] = field(default_factory=dict)


def _front_at(x: np.ndarray, density: np.ndarray, level: float) -> float:
    """从大 x 向小 x 扫描，第一次达到 level 的位置（线性插值）"""
    above = np.nonzero(density >= level)[0]
    if above.size == 0:
        raise InvalidParameterError("快照中密度从未达到波前阈值")
    i = above[-1]
    if i == x.size - 1:
        return float(x[-1])
    d0, d1 = density[i], density[i + 1]
    return float(x[i] + (level - d0) * (x[i + 1] - x[i]) / (d1 - d0))


def locate_wavefront(snapshot: WaveSnapshot, threshold: float = 0.1,
                     sensitivity: Sequence[float] = SENSITIVITY_THRESHOLDS) -> WavefrontReport:
    """
    定位外部区快照的波前

    平台均值取粗略波前（密度最后一次 ≥ 0.5）之后方、位置在其前半段内的平均密度；
    波前为从大 x 往回扫描时密度首次达到 threshold·平台均值 的位置。
    """
    x = np.asarray(snapshot.x, dtype=float)
    density = np.asarray(snapshot.density)
    if x.size < 3 or np.any(np.diff(x) <= 0):
        raise InvalidParameterError("快照位置必须严格递增且至少 3 个点")

    coarse = _front_at(x, density, 0.5)
    behind = (x >= x[0]) & (x <= x[0] + 0.5 * (coarse - x[0]))
    plateau = float(np.mean(density[behind])) if np.any(behind) else float(np.mean(density))

    position = _front_at(x, density, threshold * plateau)
    fronts = {float(level): _front_at(x, density, level * plateau) for level in sensitivity}
    log_info(f"t = {snapshot.t:.1f} fs 波前位置 {position:.2f} nm（平台均值 {plateau:.4f}），"
             f"阈值敏感度: {fronts}")
    return WavefrontReport(position=position, threshold=threshold, plateau_mean=plateau, sensitivity=fronts)


def locate_maxima(trace: TimeTrace, count: int = 3, prominence: float = 0.01, t_start: float = 0.0) -> np.ndarray:
    """
    时间序列前 count 个局部极大的时刻（抛物线插值细化）

    Args:
        prominence: 以密度变化幅度为单位的显著度下限，滤掉数值起伏
        t_start: 早于该时刻（fs）的极大不计入，用于跳过快门刚打开时的直接透射脉冲

    Returns:
        时刻数组（fs），长度可能小于 count
    """
    density = np.asarray(trace.density)
    t = np.asarray(trace.t, dtype=float)
    span = float(np.ptp(density)) if density.size else 0.0
    peaks, _ = find_peaks(density, prominence=prominence * span)
    peaks = peaks[t[peaks] >= t_start]
    times = []
    for p in peaks[:count]:
        y0, y1, y2 = density[p - 1], density[p], density[p + 1]
        curvature = y0 - 2.0 * y1 + y2
        shift = 0.5 * (y0 - y2) / curvature if curvature != 0 else 0.0
        times.append(t[p] + shift * (t[p + 1] - t[p]))
    return np.array(times)


def maxima_phase_deviation(times: Sequence[float], omega: float) -> np.ndarray:
    """极大时刻相对 τ_m 的相位偏差 ω t_max - (2m-1)π（rad）"""
    times = np.asarray(times, dtype=float)
    m = np.arange(1, times.size + 1)
    return omega * times - (2 * m - 1) * np.pi


def relative_l2_error(reference: np.ndarray, candidate: np.ndarray, weights: Optional[np.ndarray] = None) -> float:
    """‖candidate - reference‖ / ‖reference‖"""
    reference = np.asarray(reference)
    candidate = np.asarray(candidate)
    w = np.ones(reference.shape) if weights is None else np.asarray(weights)
    return float(np.sqrt(np.sum(w * np.abs(candidate - reference) ** 2) / np.sum(w * np.abs(reference) ** 2)))
