"""
波-Sobolev 乘积估计的判定

估计 ‖uv‖_{H^{-s0,-b0}} ≲ ‖u‖_{H^{s1,b1}} ‖v‖_{H^{s2,b2}} 由条件 (P1)-(P10) 判定，
三线性对偶通过交换三个指标对的角色实现。
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Tuple

from .exponent_core import HALF, ONE, ZERO, Exponent

logger = logging.getLogger(__name__)


class IndexPair(NamedTuple):
    s: Exponent
    b: Exponent

    @classmethod
    def of(cls, s, b) -> "IndexPair":
        return cls(Exponent.of(s), Exponent.of(b))

    def __neg__(self) -> "IndexPair":
        return IndexPair(-self.s, -self.b)

    def __str__(self) -> str:
        return f"({self.s}, {self.b})"


class Permutation(Enum):
    """把输入的三个指标对分配到角色 (0, 1, 2) 的方式，按此顺序尝试"""

    IDENTITY = (0, 1, 2)
    SWAP01 = (1, 0, 2)
    SWAP02 = (2, 1, 0)

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class TrilinearExponents:
    pairs: Tuple[IndexPair, IndexPair, IndexPair]

    @classmethod
    def from_sextuple(cls, s0, b0, s1, b1, s2, b2) -> "TrilinearExponents":
        return cls((IndexPair.of(s0, b0), IndexPair.of(s1, b1), IndexPair.of(s2, b2)))

    def sextuple(self) -> Tuple[Exponent, ...]:
        return tuple(value for pair in self.pairs for value in pair)

    def permuted(self, permutation: Permutation) -> "TrilinearExponents":
        return TrilinearExponents(tuple(self.pairs[i] for i in permutation.value))

    def s_sum(self) -> Exponent:
        return self.pairs[0].s + self.pairs[1].s + self.pairs[2].s

    def __str__(self) -> str:
        return "[" + ", ".join(str(pair) for pair in self.pairs) + "]"


@dataclass(frozen=True)
class ConditionAtom:
    """一个原子不等式 lhs (relation) rhs 及其判定结果"""

    label: str
    lhs: Exponent
    relation: str
    rhs: Exponent
    holds: bool


_RELATIONS = {
    "<": lambda x, y: x < y,
    "<=": lambda x, y: x <= y,
    ">": lambda x, y: x > y,
    ">=": lambda x, y: x >= y,
}


def _atom(label: str, lhs: Exponent, relation: str, rhs) -> ConditionAtom:
    rhs = Exponent.of(rhs)
    return ConditionAtom(label, lhs, relation, rhs, _RELATIONS[relation](lhs, rhs))


@dataclass(frozen=True)
class ConditionReport:
    exponents: TrilinearExponents
    atoms: Tuple[ConditionAtom, ...]

    @property
    def holds(self) -> bool:
        return all(atom.holds for atom in self.atoms)

    def failures(self) -> Tuple[ConditionAtom, ...]:
        return tuple(atom for atom in self.atoms if not atom.holds)


def check_conditions(t: TrilinearExponents) -> ConditionReport:
    """
    逐条精确判定 (P1)-(P10) 的 15 个原子不等式

    (P1)-(P9) 为严格不等式（(P1) 中的 b0 ≤ 0 除外），(P10) 为非严格不等式。

    Args:
        t: 按角色 (0, 1, 2) 排列的三线性指数

    Returns:
        条件报告
    """
    (s0, b0), (s1, b1), (s2, b2) = t.pairs
    s_sum = t.s_sum()
    b_sum = b0 + b1 + b2
    atoms = (
        _atom("P1a", b0, "<=", ZERO),
        _atom("P1b", b1, ">", ZERO),
        _atom("P1c", b2, ">", ZERO),
        _atom("P2", b_sum, ">", HALF),
        _atom("P3a", b0 + b1, ">", ZERO),
        _atom("P3b", b0 + b2, ">", ZERO),
        _atom("P4", s_sum, ">", Fraction(3, 2) - b_sum),
        _atom("P5", s_sum, ">", ONE - (b0 + b1)),
        _atom("P6", s_sum, ">", ONE - (b0 + b2)),
        _atom("P7", s_sum, ">", HALF - b0),
        _atom("P8", s_sum, ">", Fraction(3, 4)),
        _atom("P9", s0 + b0 + (s1 + s2).scale(2), ">", ONE),
        _atom("P10a", s1 + s2, ">=", -b0),
        _atom("P10b", s0 + s2, ">=", ZERO),
        _atom("P10c", s0 + s1, ">=", ZERO),
    )
    return ConditionReport(t, atoms)


@dataclass(frozen=True)
class ProductVerdict:
    exponents: TrilinearExponents
    holds: bool
    permutation: Optional[Permutation]
    reports: Tuple[ConditionReport, ...]


def check_product_estimate(t: TrilinearExponents) -> ProductVerdict:
    """
    在三线性对偶下判定乘积估计

    依次尝试恒等、交换 0↔1、交换 0↔2 三种角色分配，返回第一个满足全部条件的分配。
    角色 1 与 2 的条件对称，因此三种分配覆盖全部排列。

    Args:
        t: 三线性指数

    Returns:
        判定结果，包含见证排列和三份条件报告
    """
    reports = tuple(check_conditions(t.permuted(p)) for p in Permutation)
    witness = next((p for p, report in zip(Permutation, reports) if report.holds), None)
    if witness is None:
        logger.debug("乘积估计不成立: %s", t)
    return ProductVerdict(t, witness is not None, witness, reports)


def check_sobolev_time_product(s0, s1, s2) -> bool:
    """
    二维固定时间乘积 H^{s1}·H^{s2} ⊆ H^{-s0} 的 Hölder-Sobolev 充分条件

    要求 s0+s1+s2 ≥ 1，每个指标在 [0,1) 内，且两两之和非负。返回 False 只表示未被认证。
    """
    indices = [Exponent.of(s) for s in (s0, s1, s2)]
    if indices[0] + indices[1] + indices[2] < ONE:
        return False
    if any(s < ZERO or s >= ONE for s in indices):
        return False
    return all(indices[i] + indices[j] >= ZERO for i, j in ((0, 1), (0, 2), (1, 2)))


def count_dual_witnesses(verdicts: Iterable[ProductVerdict]) -> int:
    """统计需要非恒等排列的估计个数"""
    return sum(1 for v in verdicts if v.holds and v.permutation is not Permutation.IDENTITY)
