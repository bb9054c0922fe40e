#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
特殊函数包

Faddeeva 函数、Moshinsky 函数及其参数
"""

from .moshinsky import (
    OVERFLOW_LIMIT,
    T_MIN,
    MoshinskyArgument,
    accuracy_map,
    faddeeva,
    moshinsky_M,
    moshinsky_argument,
)

__all__ = [
    'OVERFLOW_LIMIT',
    'T_MIN',
    'MoshinskyArgument',
    'accuracy_map',
    'faddeeva',
    'moshinsky_M',
    'moshinsky_argument',
]
