#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
测试精确指数与空间运算

覆盖指数的字典序、ε² 拒绝、字符串格式，空间嵌入规则、求交、插值与插值参数求解，
以及目标中单侧指数类的判定。

使用方法:
    pytest tests/test_exponent_core.py
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# 确保可以导入xsb_ladder模块
sys.path.append(str(Path(__file__).parent.parent / "src/"))
from xsb_ladder.impl.exceptions import (
    ExponentError, LadderSyntaxError, MalformedExponentError, SpaceMismatchError,
)
from xsb_ladder.impl.exponent_core import (
    EPS, HALF, ONE, ZERO, EmbeddingRule, Exponent, Family, GoalExponent, GoalSpace, Ordering, Side,
    Space, embedding_rule, exp_cmp, goal_reached, interpolate, solve_interpolation, space_embeds, space_meet,
)

# 字面量及其规范字符串
FORMAT_CASES = [
    ("3/4+1*e", "3/4+e"),
    ("7/16-1/4*e", "7/16-1/4*e"),
    ("-5/32-3*e", "-5/32-3*e"),
    ("-5/32-3e", "-5/32-3*e"),
    ("0", "0"),
    ("2/4", "1/2"),
    ("1/2-e", "1/2-e"),
]


@pytest.mark.parametrize("text,expected", FORMAT_CASES)
def test_parse_and_format(text, expected):
    assert str(Exponent.parse(text)) == expected


def test_lexicographic_order():
    # 任意正 ε 系数都小于任意正的精确差
    assert Exponent(Fraction(1, 2), 1000) < Exponent(Fraction(1, 2) + Fraction(1, 10 ** 6))
    assert exp_cmp("1/2+e", "1/2") is Ordering.GREATER
    assert exp_cmp("1/2-e", "1/2") is Ordering.LESS
    assert exp_cmp("1/2", Exponent(Fraction(1, 2))) is Ordering.EQUAL
    assert HALF + EPS > HALF > HALF - EPS


def test_arithmetic_is_exact():
    x = Exponent.parse("1/4+2*e")
    assert x + x == Exponent.parse("1/2+4*e")
    assert ONE - x == Exponent.parse("3/4-2*e")
    assert x * 2 == Exponent.parse("1/2+4*e")
    assert x * Exponent(Fraction(1, 2)) == Exponent.parse("1/8+e")
    assert -x == Exponent.parse("-1/4-2*e")
    assert x.value(Fraction(1, 8)) == Fraction(1, 2)
    assert float(x) == 0.25


def test_epsilon_squared_rejected():
    with pytest.raises(ExponentError):
        EPS * EPS
    with pytest.raises(ExponentError):
        Exponent.parse("1/2+e") * Exponent.parse("1/4-e")


def test_float_rejected():
    with pytest.raises(ExponentError):
        Exponent.of(0.5)


@pytest.mark.parametrize("text", ["1//2", "e+1", "1/2+", ""])
def test_malformed_literal(text):
    with pytest.raises(LadderSyntaxError):
        Exponent.parse(text)


def test_zero_denominator():
    with pytest.raises(MalformedExponentError):
        Exponent.parse("1/0")


def test_space_construction():
    assert str(Space.x("-1/8-1*e", "1/4+2*e")) == "X(-1/8-e, 1/4+2*e)"
    assert str(Space.ct("1/2")) == "Ct(1/2)"
    with pytest.raises(SpaceMismatchError):
        Space(Family.CT, ZERO, ZERO)
    with pytest.raises(SpaceMismatchError):
        Space(Family.X, ZERO)


def test_embedding_rules():
    slab_x = Space.x(0, 0, slab=True)
    assert embedding_rule(Space.x(1, 1), Space.x(0, 0)) is EmbeddingRule.MONOTONE
    assert embedding_rule(Space.x(0, 0), Space.x(1, 0)) is None
    # 时间带上的成员关系不蕴含全时间上的成员关系
    assert embedding_rule(slab_x, Space.x(0, 0)) is None
    assert embedding_rule(Space.ct(0, slab=True), slab_x) is EmbeddingRule.SLAB
    assert embedding_rule(Space.ct(0, slab=True), Space.x(0, "1/2", slab=True)) is None
    assert embedding_rule(Space.x(0, "1/2+e"), Space.h(0, "1/2")) is EmbeddingRule.X_H
    assert embedding_rule(Space.x(0, "1/2+e"), Space.ct(0)) is EmbeddingRule.CONTINUITY
    assert embedding_rule(Space.x(0, "1/2"), Space.ct(0)) is None
    assert embedding_rule(Space.x(0, 0), Space.x(0, 0, family=Family.X_PLUS)) is EmbeddingRule.MONOTONE
    assert embedding_rule(Space.x(0, 0, family=Family.X_PLUS), Space.x(0, 0)) is None
    with pytest.raises(SpaceMismatchError):
        embedding_rule(Space.x(0, 0, family=Family.X_MINUS), Space.x(0, 0, family=Family.X_PLUS))
    assert EmbeddingRule.MONOTONE.axiom is None
    assert EmbeddingRule.SLAB.axiom == "slab-embedding"


def test_space_meet():
    meet = space_meet([Space.x(0, "1/2+e", True), Space.x("-1/2", 1, True), Space.x(0, 0, True)])
    assert meet == Space.x("-1/2", 0, True)
    with pytest.raises(SpaceMismatchError):
        space_meet([])
    with pytest.raises(SpaceMismatchError):
        space_meet([Space.x(0, 0), Space.h(0, 0)])


def test_interpolate():
    a, b = Space.x("-1/2", 1, True), Space.x(0, 0, True)
    assert interpolate(a, b, "1/4+2*e") == Space.x("-1/8-e", "1/4+2*e", True)
    assert interpolate(a, b, 0) == b
    assert interpolate(a, b, 1) == a
    with pytest.raises(ExponentError):
        interpolate(a, b, "1+e")
    with pytest.raises(SpaceMismatchError):
        interpolate(a, Space.h(0, 0, True), "1/2")


def test_solve_interpolation():
    a, b = Space.x("-1/2", 1, True), Space.x(0, 0, True)
    assert solve_interpolation(a, b, Space.x("-1/8-e", "1/4+2*e", True)) == Exponent.parse("1/4+2*e")
    assert solve_interpolation(a, b, Space.x("-1/4+e", "1/2-2*e", True)) == Exponent.parse("1/2-2*e")
    # 两个坐标给出矛盾的 θ
    assert solve_interpolation(a, b, Space.x("-1/8", "1/2", True)) is None
    # 只在 s 上求解
    assert solve_interpolation(a, b, Space.x("-1/8", "1/2", True), ("s",)) == Exponent(Fraction(1, 4))
    # θ 超出 [0,1]
    assert solve_interpolation(a, b, Space.x(-1, 2, True)) is None
    # 族不同
    assert solve_interpolation(a, b, Space.h(0, 0, True)) is None


def test_goal_representative():
    minus = GoalExponent(Fraction(-5, 32), Side.MINUS)
    plus = GoalExponent(Fraction(1, 2), Side.PLUS)
    assert minus.representative(None, 100) == Exponent.parse("-5/32-100*e")
    assert plus.representative(Exponent.parse("1/2+e"), 100) == Exponent.parse("1/2+e")
    assert plus.representative(Exponent.parse("1/2+1000*e"), 100) == Exponent.parse("1/2+100*e")
    assert plus.representative(Exponent.parse("1/2"), 100) is None
    assert str(plus) == "1/2+"


def test_goal_reached():
    goal = GoalSpace(Family.X, GoalExponent(Fraction(-5, 32), Side.MINUS),
                     GoalExponent(Fraction(1, 2), Side.PLUS), slab=True)
    reached = goal_reached(Space.x("-5/32-3*e", "1/2+e", True), goal)
    assert reached == Space.x("-5/32-100*e", "1/2+e", True)
    # ε 系数超过上限
    assert goal_reached(Space.x("-5/32-101*e", "1/2+e", True), goal) is None
    assert goal_reached(Space.x("-5/32-101*e", "1/2+e", True), goal, budget=200) is not None
    # b 恰好为 1/2 不属于 "1/2+"
    assert goal_reached(Space.x(0, "1/2", True), goal) is None
    assert str(goal) == "X(-5/32-, 1/2+)"


def test_constants():
    assert ZERO == 0 and ONE == 1 and HALF == Fraction(1, 2)
    assert space_embeds(Space.x(0, ONE), Space.x(ZERO, HALF))


# 比较性质扫描使用的指数：base 取 -1/2 到 3/4，ε 系数取 -1、-1/2、0、1
ORDER_GRID = [Exponent(Fraction(n, 4), Fraction(k, 2)) for n in range(-2, 4) for k in (-2, -1, 0, 2)]


@pytest.mark.parametrize("a", ORDER_GRID, ids=[str(x) for x in ORDER_GRID])
def test_exp_cmp_is_lexicographic_total_order(a):
    for b in ORDER_GRID:
        ordering = exp_cmp(a, b)
        key_a, key_b = (a.base, a.slack), (b.base, b.slack)
        assert ordering.value == (key_a > key_b) - (key_a < key_b)
        assert exp_cmp(b, a).value == -ordering.value
        assert (ordering is Ordering.EQUAL) == (a == b)
        for c in ORDER_GRID:
            if ordering is not Ordering.GREATER and exp_cmp(b, c) is not Ordering.GREATER:
                assert exp_cmp(a, c) is not Ordering.GREATER
