#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Gamow 共振态与展开系数

归一化约定（u² 而非 |u|²）：
    ∫₀ᴸ u_n²(x) dx + i[u_n²(0) + u_n²(L)]/(2k_n) = 1
在此约定下 t(k)e^{ikL} 在 k_n 处的留数等于 i·u_n(0)·u_n(L)，
residue_check 直接检验这一点。
"""

from dataclasses import dataclass, replace
from typing import List, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from utils.errors import DegenerateStateError
from utils.global_manager import log_debug
from utils.potential import PotentialProfile
from utils.scattering import propagate_value_derivative

from .poles import ResonancePole, denominator

QUADRATURE_ORDER = 48


def _gauss_nodes(profile: PotentialProfile, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """每段独立的 Gauss-Legendre 节点与权重"""
    nodes, weights = leggauss(order)
    xs, ws = [], []
    edges = profile.boundaries
    for start, stop in zip(edges[:-1], edges[1:]):
        half = 0.5 * (stop - start)
        xs.append(start + half * (nodes + 1.0))
        ws.append(half * weights)
    return np.concatenate(xs), np.concatenate(ws)


def _normalization_integral(profile: PotentialProfile, k: complex, psi0: complex, dpsi0: complex,
                            order: int) -> Tuple[complex, float]:
    """返回 (N, ∫|ψ|²)，N 为上面约定中的左端表达式"""
    x, w = _gauss_nodes(profile, order)
    psi, _ = propagate_value_derivative(profile, k, x, psi0, dpsi0)
    ends, _ = propagate_value_derivative(profile, k, np.array([0.0, profile.length]), psi0, dpsi0)
    value = np.sum(w * psi ** 2) + 1j * (ends[0] ** 2 + ends[1] ** 2) / (2.0 * k)
    return complex(value), float(np.sum(w * np.abs(psi) ** 2))


@dataclass(frozen=True)
class GamowState:
    """
    归一化的 Gamow 态 u_n(x)

    Attributes:
        k: 复本征波数
        profile: 势
        segment_values: 各段左端的 (u, u')
        u0: u_n(0)
        uL: u_n(L)
        normalization_residual: 用更高阶积分复核的 |N[u] - 1|
        outgoing_residual: 右端 |u' - ik u| / |k u|
    """
    k: complex
    profile: PotentialProfile
    segment_values: Tuple[Tuple[complex, complex], ...]
    u0: complex
    uL: complex
    normalization_residual: float
    outgoing_residual: float

    def __call__(self, x) -> np.ndarray:
        """在任意位置求 u_n(x)；结构外为纯出射波"""
        x = np.asarray(x, dtype=float)
        length = self.profile.length
        values = np.empty(x.shape, dtype=complex)
        left, right = x < 0, x > length
        inside = ~(left | right)
        values[left] = self.u0 * np.exp(-1j * self.k * x[left])
        values[right] = self.uL * np.exp(1j * self.k * (x[right] - length))
        if np.any(inside):
            values[inside], _ = propagate_value_derivative(self.profile, self.k, x[inside], *self.segment_values[0])
        return values if values.ndim else values.item()

    def coefficients(self) -> List[Tuple[complex, complex]]:
        """
        平面波系数

        Returns:
            [左侧区, 各段..., 右侧区] 的 (A, B)，每段写作 A e^{iκ(x-x_j)} + B e^{-iκ(x-x_j)}；
            左侧区与右侧区以 k 为波数、以 0 和 L 为参考点
        """
        result = [self._split(self.k, *self.segment_values[0])]
        c2 = self.profile.hbar2_over_2m
        for (value, slope), segment in zip(self.segment_values, self.profile.segments):
            kappa = np.sqrt(complex(self.k ** 2 - segment.height / c2))
            result.append(self._split(kappa, value, slope))
        _, slope_end = propagate_value_derivative(self.profile, self.k, np.array([self.profile.length]),
                                                  *self.segment_values[0])
        result.append(self._split(self.k, self.uL, complex(slope_end[0])))
        return result

    @staticmethod
    def _split(kappa: complex, value: complex, slope: complex) -> Tuple[complex, complex]:
        return 0.5 * (value + slope / (1j * kappa)), 0.5 * (value - slope / (1j * kappa))

    def mirror(self) -> 'GamowState':
        """镜像伙伴 u_{-n} = u_n*"""
        return replace(self, k=-self.k.conjugate(),
                       segment_values=tuple((v.conjugate(), s.conjugate()) for v, s in self.segment_values),
                       u0=self.u0.conjugate(), uL=self.uL.conjugate())


def gamow_state(profile: PotentialProfile, pole: ResonancePole, order: int = QUADRATURE_ORDER) -> GamowState:
    """
    在 k_n 处以纯出射边界条件传播并归一化

    x = 0 处取 (u, u') ∝ (1, -ik_n)，即左侧只有 e^{-ik_n x}。

    Raises:
        DegenerateStateError: 归一化积分数值奇异
    """
    k = pole.k
    psi0, dpsi0 = 1.0 + 0j, -1j * k
    norm, magnitude = _normalization_integral(profile, k, psi0, dpsi0, order)
    if not np.isfinite(norm) or abs(norm) <= 1e-12 * magnitude:
        raise DegenerateStateError(f"极点 {k} 的归一化积分奇异: N = {norm}")

    scale = 1.0 / np.sqrt(norm)
    edges = profile.boundaries
    values, slopes = propagate_value_derivative(profile, k, edges, psi0 * scale, dpsi0 * scale)
    segment_values = tuple((complex(v), complex(s)) for v, s in zip(values[:-1], slopes[:-1]))
    u0, uL, slope_L = complex(values[0]), complex(values[-1]), complex(slopes[-1])

    check, _ = _normalization_integral(profile, k, u0, -1j * k * u0, 2 * order)
    outgoing = abs(slope_L - 1j * k * uL) / abs(k * uL)
    state = GamowState(k=k, profile=profile, segment_values=segment_values, u0=u0, uL=uL,
                       normalization_residual=abs(check - 1.0), outgoing_residual=outgoing)
    log_debug(f"Gamow 态 n={pole.index}: 归一化残差 {state.normalization_residual:.3e}, "
              f"出射条件残差 {outgoing:.3e}")
    return state


def expansion_coefficients(state: GamowState, pole: ResonancePole, k: float, x) -> Tuple[np.ndarray, complex]:
    """
    φ_n(x, k) = 2k u_n(0) u_n(x) / (k² - k_n²)，T_n = φ_n(L, k) e^{-ik_n L}

    pole 与 state 须对应同一个 k_n（镜像伙伴同样适用）。
    """
    q = pole.k
    denominator_k = k * k - q * q
    phi = 2.0 * k * state.u0 * np.asarray(state(x)) / denominator_k
    t_n = 2.0 * k * state.u0 * state.uL / denominator_k * np.exp(-1j * q * state.profile.length)
    return (phi if np.ndim(phi) else complex(phi)), complex(t_n)


def one_level_transmission(pole: ResonancePole, state: GamowState, k) -> complex:
    """单能级透射振幅 T_k ≈ 2ik e^{-ikL} u_n(0) u_n(L) / (k² - k_n²)"""
    length = state.profile.length
    return 2j * k * np.exp(-1j * k * length) * state.u0 * state.uL / (k * k - pole.k ** 2)


def residue_check(profile: PotentialProfile, pole: ResonancePole, state: GamowState,
                  h: float = 1e-6) -> complex:
    """
    检验 Res_{k_n}[t(k)e^{ikL}] = i·u_n(0)·u_n(L)

    留数由 e^{ik_n L}/D'(k_n) 给出，D' 用五点差分。

    Returns:
        复相对残差 (留数 / 期望值) - 1
    """
    k = pole.k
    points = np.array([k - 2 * h, k - h, k + h, k + 2 * h])
    d = denominator(profile, points)
    derivative = (d[0] - 8.0 * d[1] + 8.0 * d[2] - d[3]) / (12.0 * h)
    residue = np.exp(1j * k * profile.length) / derivative
    expected = 1j * state.u0 * state.uL
    return complex(residue / expected - 1.0)
