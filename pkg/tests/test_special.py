#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Faddeeva 与 Moshinsky 函数"""

import mpmath
import numpy as np
import pytest

from utils.errors import InvalidParameterError, MoshinskyOverflowError, PhysicalDomainError, SingularTimeError
from utils.special import OVERFLOW_LIMIT, T_MIN, accuracy_map, faddeeva, moshinsky_M, moshinsky_argument


def _reference_w(z: complex) -> complex:
    with mpmath.workdps(40):
        value = mpmath.exp(-mpmath.mpc(z) ** 2) * mpmath.erfc(-1j * mpmath.mpc(z))
        return complex(value)


def test_faddeeva_against_arbitrary_precision():
    re = np.linspace(-6.0, 6.0, 13)
    im = np.linspace(0.0, 6.0, 7)
    z = (re[None, :] + 1j * im[:, None]).ravel()
    values = faddeeva(z)
    reference = np.array([_reference_w(complex(v)) for v in z])
    assert np.max(np.abs(values / reference - 1.0)) < 1e-12


def test_faddeeva_reflection_in_lower_half_plane():
    z = np.array([0.5 - 0.3j, -1.2 - 0.8j, 2.0 - 1.5j])
    expected = 2.0 * np.exp(-z ** 2) - faddeeva(-z)
    np.testing.assert_allclose(faddeeva(z), expected, rtol=1e-13)
    for value in z:
        assert faddeeva(value) == pytest.approx(_reference_w(complex(value)), rel=1e-11)


def test_faddeeva_rejects_non_finite_input():
    with pytest.raises(PhysicalDomainError):
        faddeeva(np.array([1.0, np.nan]))


def test_moshinsky_at_origin():
    assert moshinsky_M(0.0) == pytest.approx(0.5)


def test_moshinsky_mirror_identity():
    re = np.linspace(-4.0, 4.0, 17)
    im = np.linspace(-4.0, 4.0, 17)
    y = (re[None, :] + 1j * im[:, None]).ravel()
    total = moshinsky_M(y) + moshinsky_M(-y)
    scale = np.maximum(np.abs(np.exp(y ** 2)), 1.0)
    assert np.max(np.abs(total - np.exp(y ** 2)) / scale) < 1e-12


def test_moshinsky_derivative_identity():
    h = 1e-5
    for y in (0.3 + 0.2j, -1.1 + 0.7j, 2.5 - 1.0j, -0.4 - 1.3j):
        derivative = (moshinsky_M(y + h) - moshinsky_M(y - h)) / (2.0 * h)
        assert derivative - 2.0 * y * moshinsky_M(y) == pytest.approx(-1.0 / np.sqrt(np.pi), abs=1e-7)


@pytest.mark.parametrize('y', [50.0, 40.0 + 30.0j, 60.0 * np.exp(-0.25j * np.pi)])
def test_moshinsky_asymptotic_series(y):
    series = (1.0 - 1.0 / (2.0 * y ** 2) + 3.0 / (4.0 * y ** 4)) / (2.0 * np.sqrt(np.pi) * y)
    assert moshinsky_M(y) == pytest.approx(series, rel=1e-8)


def test_moshinsky_overflow_is_reported():
    with pytest.raises(MoshinskyOverflowError) as info:
        moshinsky_M(np.array([1.0, -30.0]))
    assert info.value.re_y2 == pytest.approx(900.0)
    assert info.value.re_y2 > OVERFLOW_LIMIT


def test_moshinsky_rejects_non_finite_input():
    with pytest.raises(PhysicalDomainError):
        moshinsky_M(complex(np.inf, 0.0))


def test_argument_rotation_and_frames():
    c = 38.0998 / 0.067 / 658.2119569
    argument = moshinsky_argument(40.0, 100.0, 0.3, 0.067)
    expected = np.exp(-0.25j * np.pi) * (40.0 - 2.0 * c * 0.3 * 100.0) / (2.0 * np.sqrt(c * 100.0))
    assert argument.y == pytest.approx(expected, rel=1e-6)

    internal = moshinsky_argument(np.array([0.0, 7.0, 15.0]), 100.0, 0.3, 0.067, frame='internal')
    assert np.allclose(internal.y, internal.y[0])


def test_argument_time_guard():
    with pytest.raises(SingularTimeError):
        moshinsky_argument(20.0, 0.5 * T_MIN, 0.3, 0.067)
    with pytest.raises(InvalidParameterError):
        moshinsky_argument(20.0, 10.0, 0.3, 0.067, frame='left')


def test_accuracy_map_layout():
    table = accuracy_map(n=5)
    assert table.shape == (25,)
    assert set(table.dtype.names) == {'re_z', 'im_z', 're_w', 'im_w', 'abs_w'}
    assert np.all(np.isfinite(table['abs_w']))
