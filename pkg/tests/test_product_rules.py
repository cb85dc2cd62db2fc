#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
测试乘积估计判定

此脚本检查 15 个原子条件的逐条判定、三种下标排列的尝试顺序，
以及固定时间 Hölder-Sobolev 乘积条件；并在指数网格上扫描判定对三个指标对次序的不变性
和对 Sobolev 指数的单调性。

使用方法:
    pytest tests/test_product_rules.py
"""

import sys
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from pathlib import Path

import pytest

# 确保可以导入xsb_ladder模块
sys.path.append(str(Path(__file__).parent.parent / "src/"))
from xsb_ladder.impl.exponent_core import Exponent
from xsb_ladder.impl.product_rules import (
    IndexPair, Permutation, TrilinearExponents, check_conditions, check_product_estimate,
    check_sobolev_time_product, count_dual_witnesses,
)


def sextuple(*values: str) -> TrilinearExponents:
    return TrilinearExponents.from_sextuple(*(Exponent.parse(v) for v in values))


# 角度拆分中出现的一个估计，在恒等排列下成立
PASSING = ("3/4+e", "0", "3/8-2*e", "1/4+2*e", "-1/8-e", "1/4+2*e")

# 测试项目：六元组、期望判定、期望的见证排列
TEST_CASES = [
    {
        "name": "恒等排列成立",
        "values": PASSING,
        "holds": True,
        "permutation": Permutation.IDENTITY,
    },
    {
        "name": "交换 0 与 1 后成立",
        "values": ("3/8-2*e", "1/4+2*e", "3/4+e", "0", "-1/8-e", "1/4+2*e"),
        "holds": True,
        "permutation": Permutation.SWAP01,
    },
    {
        "name": "交换 0 与 2 后成立",
        "values": ("-1/8-e", "1/4+2*e", "3/8-2*e", "1/4+2*e", "3/4+e", "0"),
        "holds": True,
        "permutation": Permutation.SWAP02,
    },
    {
        "name": "全为零不成立",
        "values": ("0", "0", "0", "0", "0", "0"),
        "holds": False,
        "permutation": None,
    },
    {
        "name": "s 之和恰为 3/4 不成立",
        "values": ("3/4", "0", "0", "1/4+2*e", "0", "1/4+2*e"),
        "holds": False,
        "permutation": None,
    },
]


@pytest.mark.parametrize("case", TEST_CASES, ids=[case["name"] for case in TEST_CASES])
def test_product_estimate(case):
    verdict = check_product_estimate(sextuple(*case["values"]))
    assert verdict.holds is case["holds"]
    assert verdict.permutation is case["permutation"]
    assert len(verdict.reports) == 3


def test_atoms_are_labelled_in_order():
    report = check_conditions(sextuple(*PASSING))
    labels = [atom.label for atom in report.atoms]
    assert labels == ["P1a", "P1b", "P1c", "P2", "P3a", "P3b", "P4", "P5", "P6", "P7", "P8", "P9",
                      "P10a", "P10b", "P10c"]
    assert report.holds
    assert report.failures() == ()


def test_strict_and_non_strict_boundaries():
    # s 之和恰为 3/4：严格不等式 (s 之和 > 3/4) 失败
    report = check_conditions(sextuple("3/4", "0", "0", "1/4+2*e", "0", "1/4+2*e"))
    failed = {atom.label for atom in report.failures()}
    assert "P8" in failed
    # s0 + s2 = 0 恰在非严格不等式边界上
    boundary = check_conditions(sextuple("1/8+e", "0", "3/4+e", "1/2-e", "-1/8-e", "1/4+2*e"))
    atoms = {atom.label: atom for atom in boundary.atoms}
    assert atoms["P10b"].holds
    assert atoms["P10b"].lhs == Exponent(0)
    assert boundary.holds


def test_epsilon_decides_strict_inequality():
    # b 之和为 1/2+4ε 时 P2 成立，为 1/2 时不成立
    with_slack = {a.label: a.holds for a in check_conditions(sextuple(*PASSING)).atoms}
    exact = {a.label: a.holds for a in check_conditions(
        sextuple("3/4+e", "0", "3/8-2*e", "1/4", "-1/8-e", "1/4")).atoms}
    assert with_slack["P2"] and not exact["P2"]


def test_permutation_order():
    assert [p.value for p in Permutation] == [(0, 1, 2), (1, 0, 2), (2, 1, 0)]
    assert Permutation.SWAP01.label == "swap01"
    t = sextuple(*PASSING)
    assert t.permuted(Permutation.SWAP02).pairs == (t.pairs[2], t.pairs[1], t.pairs[0])


def test_index_pair():
    pair = IndexPair.of("1/2", "0-e")
    assert -pair == IndexPair.of("-1/2", "0+e")
    assert str(pair) == "(1/2, 0-e)"


@pytest.mark.parametrize("s0,s1,s2,expected", [
    ("1/2", "1/2", "0", True),
    ("1/2", "1/4", "0", False),
    ("1", "0", "0", False),
    ("3/4", "1/2", "-1/4", False),
    ("1/3", "1/3", "1/3", True),
])
def test_sobolev_time_product(s0, s1, s2, expected):
    assert check_sobolev_time_product(s0, s1, s2) is expected


def test_count_dual_witnesses():
    verdicts = [check_product_estimate(sextuple(*case["values"])) for case in TEST_CASES]
    assert count_dual_witnesses(verdicts) == 2


# 性质扫描使用的指数网格
S_VALUES = ("-1/8-e", "0", "1/4", "3/4+e")
B_VALUES = ("0", "1/4+2*e", "1/2+e")
GRID_PAIRS = [IndexPair.of(Exponent.parse(s), Exponent.parse(b)) for s in S_VALUES for b in B_VALUES]


def _grid_triples(first: IndexPair):
    start = GRID_PAIRS.index(first)
    for second, third in combinations_with_replacement(GRID_PAIRS[start:], 2):
        yield TrilinearExponents((first, second, third))


@pytest.mark.parametrize("first", GRID_PAIRS, ids=[str(p) for p in GRID_PAIRS])
def test_verdict_invariant_under_pair_order(first):
    for t in _grid_triples(first):
        expected = check_product_estimate(t).holds
        for order in permutations(t.pairs):
            assert check_product_estimate(TrilinearExponents(order)).holds is expected, order


@pytest.mark.parametrize("first", GRID_PAIRS, ids=[str(p) for p in GRID_PAIRS])
def test_raising_sobolev_index_keeps_estimate(first):
    # 提高任一 s（对目标即减弱 H^{-s0} 范数）不会使成立的估计失败
    for t in _grid_triples(first):
        if not check_product_estimate(t).holds:
            continue
        for role in range(3):
            for step in (Exponent(Fraction(1, 8)), Exponent(0, 1)):
                pairs = list(t.pairs)
                pairs[role] = IndexPair(pairs[role].s + step, pairs[role].b)
                assert check_product_estimate(TrilinearExponents(tuple(pairs))).holds, (t, role, step)


def test_grid_contains_both_verdicts():
    verdicts = {check_product_estimate(t).holds for first in GRID_PAIRS for t in _grid_triples(first)}
    assert verdicts == {True, False}
