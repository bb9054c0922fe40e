#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Faddeeva 函数与 Moshinsky 函数

    w(z) = e^{-z²} erfc(-iz)
    M(y) = ½ e^{y²} erfc(y) = ½ w(iy)

上半平面直接调用 scipy.special.wofz；下半平面与 M 的对称分支
在这里显式处理，并对 e^{y²} 做溢出保护。
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.special import wofz

from utils.errors import InvalidParameterError, MoshinskyOverflowError, PhysicalDomainError, SingularTimeError
from utils.potential import CONSTANTS, PhysicalConstants

ComplexLike = Union[complex, np.ndarray]

# 对称分支允许的最大 Re(y²)
OVERFLOW_LIMIT = 700.0
# 快门打开后允许取样的最早时刻（fs）
T_MIN = 1e-3

_ROTATION = np.exp(-1j * np.pi / 4)


def _as_output(value: np.ndarray) -> ComplexLike:
    return value.item() if value.ndim == 0 else value


def faddeeva(z: ComplexLike) -> ComplexLike:
    """
    Faddeeva 函数 w(z)

    下半平面使用反射关系 w(z) = 2e^{-z²} - w(-z)；e^{-z²} 溢出时返回无穷大。

    Raises:
        PhysicalDomainError: 输入含 NaN 或无穷
    """
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise PhysicalDomainError("Faddeeva 函数的输入必须是有限复数")

    upper = z.imag >= 0
    result = np.empty(z.shape, dtype=complex)
    result[upper] = wofz(z[upper])
    lower = ~upper
    if np.any(lower):
        zl = z[lower]
        with np.errstate(over='ignore', invalid='ignore'):
            result[lower] = 2.0 * np.exp(-zl * zl) - wofz(-zl)
    return _as_output(result)


def moshinsky_M(y: ComplexLike) -> ComplexLike:
    """
    Moshinsky 函数 M(y) = ½ e^{y²} erfc(y)

    Re(y) ≥ 0 时 ½w(iy) 自身衰减，直接求值；Re(y) < 0 时使用
    M(y) = e^{y²} - M(-y)。

    Raises:
        MoshinskyOverflowError: 对称分支中 Re(y²) > 700
        PhysicalDomainError: 输入非有限
    """
    y = np.asarray(y, dtype=complex)
    if not np.all(np.isfinite(y)):
        raise PhysicalDomainError("Moshinsky 函数的输入必须是有限复数")

    result = np.empty(y.shape, dtype=complex)
    direct = y.real >= 0
    result[direct] = 0.5 * wofz(1j * y[direct])

    mirrored = ~direct
    if np.any(mirrored):
        ym = y[mirrored]
        y2 = ym * ym
        worst = float(np.max(y2.real))
        if worst > OVERFLOW_LIMIT:
            raise MoshinskyOverflowError(
                f"对称分支 e^(y²) 无法表示: Re(y²) = {worst:.6g} > {OVERFLOW_LIMIT}", re_y2=worst)
        result[mirrored] = np.exp(y2) - 0.5 * wofz(-1j * ym)
    return _as_output(result)


@dataclass(frozen=True)
class MoshinskyArgument:
    """
    Moshinsky 参数 y_q(x, t) = e^{-iπ/4} (m/2ℏt)^{1/2} [x - ℏqt/m]

    Attributes:
        y: 参数值（标量或数组）
        x: 位置（nm）；内部区参数恒取 x = 0
        t: 时间（fs）
        q: 波数（±k 或 k_{±n}）
        mass_ratio: 有效质量比
        frame: 'internal' 或 'external'
    """
    y: ComplexLike
    x: Union[float, np.ndarray]
    t: Union[float, np.ndarray]
    q: complex
    mass_ratio: float
    frame: str


def moshinsky_argument(x, t, q: complex, mass_ratio: float, frame: str = 'external',
                       constants: PhysicalConstants = CONSTANTS) -> MoshinskyArgument:
    """
    构造 Moshinsky 参数，x 与 t 可广播

    Args:
        frame: 'internal' 时强制 x = 0

    Raises:
        SingularTimeError: t < T_MIN
    """
    if frame not in ('internal', 'external'):
        raise InvalidParameterError(f"未知参照系: {frame}")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < T_MIN):
        raise SingularTimeError(f"时间必须不小于 {T_MIN} fs")
    x_arr = np.zeros_like(np.asarray(x, dtype=float)) if frame == 'internal' else np.asarray(x, dtype=float)

    c = constants.hbar_over_2m(mass_ratio)
    y = _ROTATION * (x_arr - 2.0 * c * q * t_arr) / (2.0 * np.sqrt(c * t_arr))
    return MoshinskyArgument(y=_as_output(np.asarray(y)), x=_as_output(x_arr), t=_as_output(t_arr),
                             q=complex(q), mass_ratio=mass_ratio, frame=frame)


def accuracy_map(re_range: Tuple[float, float] = (-12.0, 12.0), im_range: Tuple[float, float] = (0.0, 12.0),
                 n: int = 100) -> np.ndarray:
    """
    诊断用的 Faddeeva 取值表

    Returns:
        结构化数组，字段 re_z, im_z, re_w, im_w, abs_w（每行一个网格点）
    """
    re = np.linspace(re_range[0], re_range[1], n)
    im = np.linspace(im_range[0], im_range[1], n)
    zz = (re[None, :] + 1j * im[:, None]).ravel()
    with np.errstate(over='ignore', invalid='ignore'):
        ww = np.asarray(faddeeva(zz))
    table = np.empty(zz.size, dtype=[('re_z', float), ('im_z', float), ('re_w', float),
                                     ('im_w', float), ('abs_w', float)])
    table['re_z'], table['im_z'] = zz.real, zz.imag
    table['re_w'], table['im_w'] = ww.real, ww.imag
    table['abs_w'] = np.abs(ww)
    return table
