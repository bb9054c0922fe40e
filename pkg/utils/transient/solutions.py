#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
快门初始条件 Ψ(x,k;0) = Θ(-x)(e^{ikx} - e^{-ikx}) 的含时解

内部区 (0 ≤ x ≤ L)：
    Ψ^i = φ_k M(y_k^i) - φ_{-k} M(y_{-k}^i) - i Σ_n φ_n M(y_{k_n}^i)
外部区 (x > L)：
    Ψ^e = e^{ix²/4ct} [T_k M(y_k^e) - T_{-k} M(y_{-k}^e) - i Σ_n T_n M(y_{k_n}^e)]
其中 c = ℏ/2m，求和遍及截断极点族的第四象限极点及其镜像。

截断补偿（tail_closure）：被略去极点只剩 1/√t 代数尾项，
其总矩由求和规则 Σ_all φ_n/k_n = (φ_k + φ_{-k})/(ik) 精确给出。
无势情形没有极点且级数本身精确（零能共振使上述求和规则不成立），不做补偿。
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from utils.errors import InvalidParameterError, PhysicalDomainError, SingularTimeError
from utils.potential import PotentialProfile, wavenumber_from_energy
from utils.resonance import PoleEntry, PoleFamily, ResonancePole, expansion_coefficients, one_level_transmission
from utils.scattering import scattering_amplitudes, stationary_wave
from utils.special import T_MIN, moshinsky_M, moshinsky_argument

ArrayLike = Union[float, np.ndarray]

_TAIL_PHASE = np.exp(1j * np.pi / 4)
_POSITION_SLACK = 1e-9


@dataclass(frozen=True)
class IncidenceSpec:
    """
    入射条件

    Attributes:
        energy: 入射能量 E（meV）
        k: 入射波数（nm⁻¹）
        pole_index: 参考极点序号 n
        delta_e: ΔE_n = |E - ε_n|（meV）
        side: 'below' / 'above' / 'resonant'
    """
    energy: float
    k: float
    pole_index: int
    delta_e: float
    side: str

    @classmethod
    def from_energy(cls, energy: float, pole: ResonancePole) -> 'IncidenceSpec':
        if energy < 0:
            raise PhysicalDomainError(f"入射能量不能为负: {energy}")
        delta = energy - pole.energy
        side = 'resonant' if delta == 0 else ('above' if delta > 0 else 'below')
        k = wavenumber_from_energy(energy, pole.mass_ratio, pole.constants)
        return cls(energy=float(energy), k=float(k), pole_index=pole.index, delta_e=abs(delta), side=side)

    @classmethod
    def from_offset(cls, pole: ResonancePole, delta_e: float, side: str = 'below') -> 'IncidenceSpec':
        """E = ε_n ± ΔE"""
        if delta_e < 0:
            raise InvalidParameterError(f"ΔE 不能为负: {delta_e}")
        if side not in ('below', 'above'):
            raise InvalidParameterError(f"side 只能是 below 或 above: {side}")
        energy = pole.energy - delta_e if side == 'below' else pole.energy + delta_e
        spec = cls.from_energy(energy, pole)
        return cls(energy=spec.energy, k=spec.k, pole_index=pole.index, delta_e=float(delta_e),
                   side=side if delta_e > 0 else 'resonant')


@dataclass(frozen=True)
class WaveSnapshot:
    """
    固定时刻的波函数快照

    Attributes:
        t: 时刻（fs）
        x: 位置（nm）
        psi: 复波函数
        reference: 归一化参考，外部区为 T_k，内部区为 φ_k(x)
        region: 'internal' 或 'external'
    """
    t: float
    x: np.ndarray
    psi: np.ndarray
    reference: Union[complex, np.ndarray]
    region: str

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.psi / self.reference) ** 2

    @property
    def stationary_density(self) -> np.ndarray:
        """|φ_k(x)|²（内部区）或 |T_k|²（外部区）"""
        return np.broadcast_to(np.abs(self.reference) ** 2, self.x.shape)


@dataclass(frozen=True)
class TimeTrace:
    """固定位置的时间序列，字段含义同 WaveSnapshot"""
    x: float
    t: np.ndarray
    psi: np.ndarray
    reference: complex
    region: str

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.psi / self.reference) ** 2


def _check_times(t) -> np.ndarray:
    """t ≥ T_MIN，在任何定态量计算之前拒绝 t → 0"""
    t = np.asarray(t, dtype=float)
    if np.any(t < T_MIN):
        raise SingularTimeError(f"时间必须不小于 {T_MIN} fs: 最小值 {float(np.min(t))}")
    return t


def _finish(value: np.ndarray) -> Union[complex, np.ndarray]:
    return complex(value) if value.ndim == 0 else value


def _incident_wavenumber(profile: PotentialProfile, energy: float) -> float:
    k = wavenumber_from_energy(energy, profile.mass_ratio, profile.constants)
    if k == 0:
        raise InvalidParameterError("入射能量必须为正")
    return k


def _moshinsky(x, t, q: complex, profile: PotentialProfile, frame: str) -> np.ndarray:
    argument = moshinsky_argument(x, t, q, profile.mass_ratio, frame, profile.constants)
    return np.asarray(moshinsky_M(argument.y))


def _tail_closure(total_moment, included_moment, t: np.ndarray, profile: PotentialProfile) -> np.ndarray:
    """被略去极点的 1/√t 尾项：i e^{iπ/4} S_omit / (2√(πct))"""
    c = profile.hbar_over_2m
    return 1j * _TAIL_PHASE * (total_moment - included_moment) / (2.0 * np.sqrt(np.pi * c * t))


def psi_internal(profile: PotentialProfile, poles: PoleFamily, energy: float, x, t,
                 count: Optional[int] = None, tail_closure: bool = True) -> Union[complex, np.ndarray]:
    """
    内部区含时解 Ψ^i(x, k; t)，x 与 t 可广播

    Args:
        count: 使用的极点数（None 表示整个极点族）
        tail_closure: 是否补上被略去极点的尾项

    Raises:
        InvalidParameterError: x 不在 [0, L] 内
        SingularTimeError: t < T_MIN
    """
    x = np.asarray(x, dtype=float)
    length = profile.length
    if np.any(x < -_POSITION_SLACK) or np.any(x > length + _POSITION_SLACK):
        raise InvalidParameterError(f"内部区解要求 0 ≤ x ≤ {length} nm")
    t = _check_times(t)
    k = _incident_wavenumber(profile, energy)
    shape = np.broadcast_shapes(x.shape, t.shape)
    tb = np.broadcast_to(t, shape)

    phi_k = np.broadcast_to(stationary_wave(profile, k, x), shape)
    phi_mk = np.broadcast_to(stationary_wave(profile, -k, x), shape)
    psi = phi_k * _moshinsky(0.0, tb, k, profile, 'internal') - phi_mk * _moshinsky(0.0, tb, -k, profile, 'internal')

    moment = np.zeros(shape, dtype=complex)
    for entry in poles.truncated(count):
        for pole, state in entry.pairs():
            phi_n, _ = expansion_coefficients(state, pole, k, x)
            phi_n = np.broadcast_to(phi_n, shape)
            psi = psi - 1j * phi_n * _moshinsky(0.0, tb, pole.k, profile, 'internal')
            moment = moment + phi_n / pole.k

    if tail_closure and not profile.is_free:
        psi = psi + _tail_closure((phi_k + phi_mk) / (1j * k), moment, tb, profile)
    return _finish(psi)


def psi_external(profile: PotentialProfile, poles: PoleFamily, energy: float, x, t,
                 count: Optional[int] = None, tail_closure: bool = True) -> Union[complex, np.ndarray]:
    """
    外部区含时解 Ψ^e(x, k; t)，包含公共相因子 e^{ix²/4ct}

    Raises:
        InvalidParameterError: x < L
        SingularTimeError: t < T_MIN
    """
    x = np.asarray(x, dtype=float)
    length = profile.length
    if np.any(x < length - _POSITION_SLACK):
        raise InvalidParameterError(f"外部区解要求 x ≥ L = {length} nm")
    t = _check_times(t)
    k = _incident_wavenumber(profile, energy)
    shape = np.broadcast_shapes(x.shape, t.shape)
    xb, tb = np.broadcast_to(x, shape), np.broadcast_to(t, shape)

    t_k = complex(scattering_amplitudes(profile, k).t)
    t_mk = complex(scattering_amplitudes(profile, -k).t)
    series = t_k * _moshinsky(xb, tb, k, profile, 'external') - t_mk * _moshinsky(xb, tb, -k, profile, 'external')

    moment = 0j
    for entry in poles.truncated(count):
        for pole, state in entry.pairs():
            _, t_n = expansion_coefficients(state, pole, k, length)
            series = series - 1j * t_n * _moshinsky(xb, tb, pole.k, profile, 'external')
            moment += t_n / pole.k

    if tail_closure and not profile.is_free:
        series = series + _tail_closure((t_k + t_mk) / (1j * k), moment, tb, profile)

    c = profile.hbar_over_2m
    return _finish(np.exp(1j * xb ** 2 / (4.0 * c * tb)) * series)


def psi_external_one_level(profile: PotentialProfile, entry: PoleEntry, energy: float, x, t,
                           amplitude: str = 'exact') -> Union[complex, np.ndarray]:
    """
    单能级外部解（四项式）

    iT_n = T_k e^{i(k-k_n)L}，iT_{-n} = -T_k* e^{-i(k-k_n*)L}，T_{-k} = T_k*。

    Args:
        entry: 参考极点条目
        amplitude: 'exact' 用传递矩阵的 t(k)；'one_level' 用单能级振幅
    """
    x = np.asarray(x, dtype=float)
    length = profile.length
    if np.any(x < length - _POSITION_SLACK):
        raise InvalidParameterError(f"外部区解要求 x ≥ L = {length} nm")
    t = _check_times(t)
    k = _incident_wavenumber(profile, energy)
    shape = np.broadcast_shapes(x.shape, t.shape)
    xb, tb = np.broadcast_to(x, shape), np.broadcast_to(t, shape)

    if amplitude == 'exact':
        t_k = complex(scattering_amplitudes(profile, k).t)
    elif amplitude == 'one_level':
        t_k = complex(one_level_transmission(entry.pole, entry.state, k))
    else:
        raise InvalidParameterError(f"未知的振幅选项: {amplitude}")

    k_n = entry.pole.k
    i_t_n = t_k * np.exp(1j * (k - k_n) * length)
    i_t_mn = -t_k.conjugate() * np.exp(-1j * (k - k_n.conjugate()) * length)

    series = (t_k * _moshinsky(xb, tb, k, profile, 'external')
              - t_k.conjugate() * _moshinsky(xb, tb, -k, profile, 'external')
              - i_t_n * _moshinsky(xb, tb, k_n, profile, 'external')
              - i_t_mn * _moshinsky(xb, tb, -k_n.conjugate(), profile, 'external'))
    c = profile.hbar_over_2m
    return _finish(np.exp(1j * xb ** 2 / (4.0 * c * tb)) * series)


def free_shutter_wave(x, t, k: float, profile: PotentialProfile) -> Union[complex, np.ndarray]:
    """无势情形的精确快门解 e^{ix²/4ct}[M(y_k) - M(y_{-k})]，对全部 x 成立"""
    x = np.asarray(x, dtype=float)
    t = _check_times(t)
    shape = np.broadcast_shapes(x.shape, t.shape)
    xb, tb = np.broadcast_to(x, shape), np.broadcast_to(t, shape)
    c = profile.hbar_over_2m
    series = _moshinsky(xb, tb, k, profile, 'external') - _moshinsky(xb, tb, -k, profile, 'external')
    return _finish(np.exp(1j * xb ** 2 / (4.0 * c * tb)) * series)


def internal_snapshot(profile: PotentialProfile, poles: PoleFamily, energy: float, x, t: float,
                      count: Optional[int] = None, tail_closure: bool = True) -> WaveSnapshot:
    """内部区快照，以 φ_k(x) 归一化"""
    x = np.asarray(x, dtype=float)
    k = _incident_wavenumber(profile, energy)
    psi = np.asarray(psi_internal(profile, poles, energy, x, t, count, tail_closure))
    return WaveSnapshot(t=float(t), x=x, psi=psi, reference=np.asarray(stationary_wave(profile, k, x)),
                        region='internal')


def external_snapshot(profile: PotentialProfile, poles: PoleFamily, energy: float, x, t: float,
                      count: Optional[int] = None, tail_closure: bool = True) -> WaveSnapshot:
    """外部区快照，以 T_k 归一化"""
    x = np.asarray(x, dtype=float)
    k = _incident_wavenumber(profile, energy)
    psi = np.asarray(psi_external(profile, poles, energy, x, t, count, tail_closure))
    return WaveSnapshot(t=float(t), x=x, psi=psi, reference=complex(scattering_amplitudes(profile, k).t),
                        region='external')


def external_trace(profile: PotentialProfile, poles: PoleFamily, energy: float, x: float, t,
                   count: Optional[int] = None, tail_closure: bool = True) -> TimeTrace:
    """固定 x ≥ L 处的时间序列，以 T_k 归一化"""
    t = np.asarray(t, dtype=float)
    k = _incident_wavenumber(profile, energy)
    psi = np.asarray(psi_external(profile, poles, energy, x, t, count, tail_closure))
    return TimeTrace(x=float(x), t=t, psi=psi, reference=complex(scattering_amplitudes(profile, k).t),
                     region='external')


def internal_trace(profile: PotentialProfile, poles: PoleFamily, energy: float, x: float, t,
                   count: Optional[int] = None, tail_closure: bool = True) -> TimeTrace:
    """固定 0 ≤ x ≤ L 处的时间序列，以 φ_k(x) 归一化"""
    t = np.asarray(t, dtype=float)
    k = _incident_wavenumber(profile, energy)
    psi = np.asarray(psi_internal(profile, poles, energy, x, t, count, tail_closure))
    return TimeTrace(x=float(x), t=t, psi=psi, reference=complex(stationary_wave(profile, k, x)),
                     region='internal')


def split_regions(x: np.ndarray, length: float) -> Tuple[np.ndarray, np.ndarray]:
    """把位置数组分为内部区与外部区两部分的掩码"""
    x = np.asarray(x, dtype=float)
    inside = (x >= 0) & (x <= length)
    return inside, x > length
