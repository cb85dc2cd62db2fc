#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
测试数值校验

Dirac 矩阵恒等式、投影算子演算、零形式核的角度界、角度估计与调制权重可比性。
采样数取得较小以保证测试速度。

使用方法:
    pytest tests/test_numeric_checks.py
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# 确保可以导入xsb_ladder模块
sys.path.append(str(Path(__file__).parent.parent / "src/"))
from xsb_ladder.impl.exponent_core import Exponent
from xsb_ladder.impl.numeric_checks import (
    ANGLE_LEMMA_CONSTANT, DIRAC, Frequency, angle_between, check_projection_calculus, dirac_projection,
    nullform_kernel_norm, operator_norm_2x2, sample_angle_lemma, sample_nullform_kernel,
    symbol_bound_ratio, weight_comparability,
)
from xsb_ladder.impl.reduction_engine import AngleParams

TOLERANCE = 1e-12

# 测试项目：两个频率、两个符号、期望的核范数与比值
KERNEL_CASES = [
    {"name": "同向同号", "eta": (1.0, 0.0), "zeta": (1.0, 0.0), "signs": (1, 1), "norm": 0.0, "ratio": 0.0},
    {"name": "同向异号", "eta": (1.0, 0.0), "zeta": (1.0, 0.0), "signs": (1, -1), "norm": 1.0,
     "ratio": 1 / math.pi},
    {"name": "正交", "eta": (2.0, 0.0), "zeta": (0.0, 5.0), "signs": (1, 1), "norm": math.sin(math.pi / 4),
     "ratio": math.sin(math.pi / 4) / (math.pi / 2)},
]


def test_dirac_identities():
    residuals = DIRAC.identity_residuals()
    assert set(residuals) >= {"beta_square", "alpha1_square", "alpha_anticommute", "alpha2_beta_anticommute"}
    assert max(residuals.values()) <= DIRAC.TOLERANCE


def test_projection_calculus():
    report = check_projection_calculus(2000, seed=3)
    assert report.max_residual() <= 1e-9


def test_projection_single():
    plus = dirac_projection((3.0, 4.0), 1)
    minus = dirac_projection(Frequency((3.0, 4.0)), -1)
    assert np.allclose(plus + minus, np.eye(2), atol=TOLERANCE)
    assert np.allclose(plus @ plus, plus, atol=TOLERANCE)
    with pytest.raises(ValueError):
        dirac_projection((0.0, 0.0), 1)
    with pytest.raises(ValueError):
        dirac_projection((1.0, 0.0), 2)


def test_angle_between():
    assert angle_between((1.0, 0.0), (0.0, 1.0)) == pytest.approx(math.pi / 2)
    assert angle_between((1.0, 0.0), (-1.0, 0.0)) == pytest.approx(math.pi)
    # 近平行时 arctan2 仍然精确
    assert angle_between((1.0, 0.0), (1.0, 1e-12)) == pytest.approx(1e-12, rel=1e-6)
    with pytest.raises(ValueError):
        angle_between((0.0, 0.0), (1.0, 0.0))


def test_frequency():
    f = Frequency((3.0, 4.0), tau=1.0)
    assert f.norm == 5.0
    assert f.signed(-1).xi == (-3.0, -4.0)


def test_operator_norm():
    assert operator_norm_2x2(np.eye(2)) == pytest.approx(1.0)
    assert operator_norm_2x2(np.array([[0, 3], [0, 0]])) == pytest.approx(3.0)
    batch = np.stack([np.eye(2), 2 * np.eye(2)])
    assert np.allclose(operator_norm_2x2(batch), [1.0, 2.0])


@pytest.mark.parametrize("case", KERNEL_CASES, ids=[case["name"] for case in KERNEL_CASES])
def test_nullform_kernel(case):
    s1, s2 = case["signs"]
    assert nullform_kernel_norm(case["eta"], case["zeta"], s1, s2) == pytest.approx(case["norm"], abs=1e-12)
    assert symbol_bound_ratio(case["eta"], case["zeta"], s1, s2) == pytest.approx(case["ratio"], abs=1e-12)


def test_sample_nullform_kernel():
    report = sample_nullform_kernel(5000, seed=1)
    assert report.samples == 5000
    assert report.max_deviation <= 1e-9
    assert report.max_ratio <= 0.5 + 1e-9
    assert report == sample_nullform_kernel(5000, seed=1)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_sample_nullform_kernel_near_parallel(seed):
    # 大样本中必然出现近平行的频率对
    report = sample_nullform_kernel(1_000_000, seed=seed)
    assert report.max_deviation <= 1e-9
    assert report.max_ratio <= 0.5 + 1e-9


# 五个双线性步骤使用的角度参数，ε 按 0 处理
LADDER_ANGLE_PARAMS = [
    ("1/2-e", "1/4+2*e", "1/4+2*e"),
    ("1/2", "1/2-e", "1/2-2*e"),
    ("1/2-e", "1/4+1/2*e", "1/4+1/2*e"),
    ("1/2", "1/2-e", "1/2"),
    ("1/2-e", "1/2", "1/2"),
]


@pytest.mark.parametrize("values", LADDER_ANGLE_PARAMS, ids=["-".join(v) for v in LADDER_ANGLE_PARAMS])
def test_angle_lemma_with_tripled_constant(values):
    params = AngleParams(*(Exponent.parse(v) for v in values))
    worst = sample_angle_lemma(1_000_000, params, 3 * ANGLE_LEMMA_CONSTANT, seed=7)
    assert 0.0 < worst <= 1.0


@pytest.mark.parametrize("params", [(0.5, 0.5, 0.5), (0.0, 0.0, 0.0), (0.25, 0.5, 0.125)])
def test_angle_lemma(params):
    worst = sample_angle_lemma(5000, params, seed=2)
    assert 0.0 < worst <= 1.0


def test_angle_lemma_accepts_exact_params():
    worst = sample_angle_lemma(1000, AngleParams("1/2", "1/2-e", "1/2"), ANGLE_LEMMA_CONSTANT, seed=0)
    assert worst == sample_angle_lemma(1000, (0.5, 0.5, 0.5), ANGLE_LEMMA_CONSTANT, seed=0)


def test_angle_lemma_arguments():
    with pytest.raises(ValueError):
        sample_angle_lemma(0, (0.5, 0.5, 0.5))
    with pytest.raises(ValueError):
        sample_angle_lemma(10, (0.5, 0.5, 0.5), constant=0.0)


@pytest.mark.parametrize("m", [0.0, 0.5, 1.0, 3.0])
def test_weight_comparability(m):
    worst = weight_comparability(m, 5000, seed=4)
    assert 1.0 <= worst <= (1 + m) * (1 + 1e-12)
    if m == 0.0:
        assert worst == 1.0


def test_weight_comparability_rejects_negative_mass():
    with pytest.raises(ValueError):
        weight_comparability(-1.0, 10)
