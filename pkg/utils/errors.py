#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
异常定义

所有数值模块抛出的异常都继承自 SimulationError，
编排层（任务执行器 / main.py）据此映射退出码。
"""

from typing import Optional


class SimulationError(Exception):
    """模拟过程异常基类"""
    pass


class InvalidParameterError(SimulationError, ValueError):
    """参数不合法（非正尺寸、负势垒等）"""
    pass


class PhysicalDomainError(SimulationError, ValueError):
    """输入超出物理定义域（负能量、极点不在第四象限等）"""
    pass


class SingularInputError(SimulationError, ValueError):
    """奇异输入（例如 k = 0）"""
    pass


class SingularTimeError(SimulationError, ValueError):
    """时间小于 t_min，Moshinsky 参数在快门打开瞬间奇异"""
    pass


class ConvergenceError(SimulationError):
    """迭代未收敛"""

    def __init__(self, message: str, last_iterate: Optional[complex] = None):
        super().__init__(message)
        self.last_iterate = last_iterate


class DegenerateStateError(SimulationError):
    """Gamow 态归一化积分数值奇异"""
    pass


class MoshinskyOverflowError(SimulationError, OverflowError):
    """对称关系分支中 exp(y²) 不可表示"""

    def __init__(self, message: str, re_y2: float):
        super().__init__(message)
        self.re_y2 = re_y2


class OutOfValidityError(SimulationError):
    """闭式公式在有效时间窗之外被调用"""

    def __init__(self, message: str, threshold_fs: float):
        super().__init__(message)
        self.threshold_fs = threshold_fs


class NumericalError(SimulationError):
    """线性求解等数值失败"""
    pass


class ConfigError(SimulationError):
    """场景配置错误，带行号与字段名"""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        location = []
        if line is not None:
            location.append(f"第 {line} 行")
        if field is not None:
            location.append(f"字段 '{field}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
