"""
归约引擎

把一次 X^{s,b} 双线性估计机械地化为有限个 H^{s,b} 乘积估计：
- energy_step: 线性能量估计
- dualize / undualize: Dirac 非线性项的对偶改写
- angle_reduce: 角度估计把零形式估计拆成至多六个乘积估计
- verify_nullform_estimate: 拆分后逐个判定
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from .exceptions import AngleParamsError, EnergyStepError, ReductionError, SpaceMismatchError
from .exponent_core import HALF, ONE, ZERO, Exponent, Family, Space
from .product_rules import (
    IndexPair, Permutation, ProductVerdict, TrilinearExponents, check_product_estimate,
)

logger = logging.getLogger(__name__)

SIGN_SLOTS = ("±0", "±1", "±2")


class Nonlinearity(str, Enum):
    KLEIN_GORDON = "klein-gordon"
    DIRAC = "dirac"


@dataclass(frozen=True)
class NullFormEstimate:
    """
    零形式估计 ‖⟨βP_{±1}ψ, P_{±2}ψ′⟩‖_{X^{-s0,-b0}} ≲ ‖ψ‖_{X^{s1,b1}} ‖ψ′‖_{X^{s2,b2}}

    target 按三线性规范存储 (s0, b0)；target_norm 给出范数上实际出现的 (-s0, -b0)。
    符号槽是全称量化的，从不分支。
    """

    target: IndexPair
    factor1: IndexPair
    factor2: IndexPair
    source: Nonlinearity = Nonlinearity.KLEIN_GORDON
    signs: Tuple[str, str, str] = SIGN_SLOTS

    def __post_init__(self):
        for name in ("target", "factor1", "factor2"):
            pair = getattr(self, name)
            object.__setattr__(self, name, IndexPair.of(*pair))
        for name in ("factor1", "factor2"):
            if getattr(self, name).b < ZERO:
                raise ReductionError(f"{name} 的调制指数 {getattr(self, name).b} 为负，无法使用 X-H 嵌入")

    @property
    def target_norm(self) -> IndexPair:
        return -self.target

    def swapped(self) -> "NullFormEstimate":
        return NullFormEstimate(self.target, self.factor2, self.factor1, self.source, self.signs)

    def as_trilinear(self) -> TrilinearExponents:
        return TrilinearExponents((self.target, self.factor1, self.factor2))


@dataclass(frozen=True)
class AngleParams:
    a: Exponent
    b: Exponent
    c: Exponent

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = Exponent.of(getattr(self, name))
            if value < ZERO or value > HALF:
                raise AngleParamsError(f"角度参数 {name}={value} 不在 [0, 1/2] 内")
            object.__setattr__(self, name, value)

    def as_tuple(self) -> Tuple[Exponent, Exponent, Exponent]:
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


@dataclass(frozen=True)
class DiracSourceEstimate:
    """‖P_{±2}(φβP_{±1}ψ)‖_{X^{s,b}} ≲ ‖φ‖_{X^{...}} ‖ψ‖_{X^{...}}，target 即 (s, b)"""

    target: IndexPair
    phi_factor: IndexPair
    psi_factor: IndexPair

    def __post_init__(self):
        for name in ("target", "phi_factor", "psi_factor"):
            object.__setattr__(self, name, IndexPair.of(*getattr(self, name)))


def energy_step(source: Space, b, data: Optional[Space] = None) -> Space:
    """
    线性能量估计：数据在 H^s、源项在 X^{s,b-1}(S_T) 时解在 X^{s,b}(S_T)

    Args:
        source: 源项所在的 X 空间
        b: 解的调制指数，须大于 1/2
        data: 可选的初值空间（Ct），解的 s 取两者较小者

    Returns:
        解所在的 X 空间

    Raises:
        EnergyStepError: b ≤ 1/2，或源项调制指数低于 b-1
    """
    b = Exponent.of(b)
    if b <= HALF:
        raise EnergyStepError(f"能量估计要求 b > 1/2，当前 b={b}")
    if not source.family.is_x:
        raise EnergyStepError(f"源项必须位于 X 空间，当前为 {source}")
    if source.b < b - ONE:
        raise EnergyStepError(f"源项调制指数 {source.b} 低于 b-1={b - ONE}")
    s = source.s
    if data is not None:
        if data.family is not Family.CT:
            raise EnergyStepError(f"初值必须位于 Ct 空间，当前为 {data}")
        s = min(s, data.s)
    return Space(source.family, s, b, slab=True)


def klein_gordon_estimate(claim: Space, factor: IndexPair) -> NullFormEstimate:
    """Φ ∈ X^{s,b} 的源项 ⟨D⟩^{-1}⟨βψ,ψ⟩ 化为目标 (1-s, 1-b) 的零形式估计"""
    if claim.b is None:
        raise SpaceMismatchError(f"双线性步骤的结论必须带调制指数: {claim}")
    target = IndexPair(ONE - claim.s, ONE - claim.b)
    return NullFormEstimate(target, factor, factor, Nonlinearity.KLEIN_GORDON)


def dirac_estimate(claim: Space, phi_factor: IndexPair, psi_factor: IndexPair) -> DiracSourceEstimate:
    """Ψ ∈ X^{s,b} 的源项 P(φβψ) 须位于 X^{s,b-1}"""
    if claim.b is None:
        raise SpaceMismatchError(f"双线性步骤的结论必须带调制指数: {claim}")
    return DiracSourceEstimate(IndexPair(claim.s, claim.b - ONE), phi_factor, psi_factor)


def dualize(d: DiracSourceEstimate) -> NullFormEstimate:
    """
    对偶改写：目标取 φ 因子，第一因子取 -target，第二因子取 ψ 因子

    Raises:
        ReductionError: 改写后因子的调制指数为负
    """
    factor1 = -d.target
    if factor1.b < ZERO:
        raise ReductionError(f"对偶后第一因子 {factor1} 的调制指数为负")
    return NullFormEstimate(d.phi_factor, factor1, d.psi_factor, Nonlinearity.DIRAC)


def undualize(n: NullFormEstimate) -> DiracSourceEstimate:
    """dualize 的逆运算"""
    return DiracSourceEstimate(-n.factor1, n.target, n.factor2)


@dataclass(frozen=True)
class EmittedEstimate:
    """角度拆分产生的一个乘积估计；origin 形如 "a->factor1" """

    origin: str
    exponents: TrilinearExponents
    note: Optional[str] = None


def _consume(factor: IndexPair, weight: Exponent, name: str, term: str) -> Tuple[IndexPair, Optional[str]]:
    if weight > factor.b:
        raise ReductionError(f"{term} 项参数 {weight} 超过 {name} 的调制指数 {factor.b}")
    residual = factor.b - weight
    note = None
    if residual != ZERO:
        note = f"{term} 项: {name} 剩余调制权重 {residual} 依单调性舍去"
    return IndexPair(factor.s, ZERO), note


def _dedup_key(t: TrilinearExponents):
    first, second, third = t.pairs
    return (first, tuple(sorted((second, third), key=lambda p: (p.s._key(), p.b._key()))))


def angle_reduce(n: NullFormEstimate, p: AngleParams) -> List[EmittedEstimate]:
    """
    用角度估计与 X-H 嵌入把零形式估计化为乘积估计

    发射顺序为 a→因子1、a→因子2、b→因子1、b→因子2、c→因子1、c→因子2，
    然后按 (目标对, 无序因子对) 去重并保留首次出现者。

    Args:
        n: 零形式估计
        p: 角度参数

    Returns:
        去重后的乘积估计列表

    Raises:
        ReductionError: b 或 c 超过对应因子的调制指数
    """
    s0, b0 = n.target
    f1, f2 = n.factor1, n.factor2
    emitted: List[EmittedEstimate] = []

    # a 项：调制权重 ⟨|τ|-|ξ|⟩^a 抵消目标权重的一部分
    a_target = IndexPair(s0, b0 - p.a)
    emitted.append(EmittedEstimate("a->factor1", TrilinearExponents(
        (a_target, IndexPair(f1.s + p.a, f1.b), f2))))
    emitted.append(EmittedEstimate("a->factor2", TrilinearExponents(
        (a_target, f1, IndexPair(f2.s + p.a, f2.b)))))

    consumed1, note_b = _consume(f1, p.b, "factor1", "b")
    emitted.append(EmittedEstimate("b->factor1", TrilinearExponents(
        (n.target, IndexPair(f1.s + p.b, ZERO), f2)), note_b))
    emitted.append(EmittedEstimate("b->factor2", TrilinearExponents(
        (n.target, consumed1, IndexPair(f2.s + p.b, f2.b))), note_b))

    consumed2, note_c = _consume(f2, p.c, "factor2", "c")
    emitted.append(EmittedEstimate("c->factor1", TrilinearExponents(
        (n.target, IndexPair(f1.s + p.c, f1.b), consumed2)), note_c))
    emitted.append(EmittedEstimate("c->factor2", TrilinearExponents(
        (n.target, f1, IndexPair(f2.s + p.c, ZERO))), note_c))

    seen = set()
    distinct = []
    for estimate in emitted:
        key = _dedup_key(estimate.exponents)
        if key in seen:
            continue
        seen.add(key)
        distinct.append(estimate)
    return distinct


@dataclass(frozen=True)
class CheckedEstimate:
    emitted: EmittedEstimate
    verdict: ProductVerdict


@dataclass(frozen=True)
class CertificateNode:
    """一次零形式估计验证的记录"""

    estimate: NullFormEstimate
    params: AngleParams
    checks: Tuple[CheckedEstimate, ...]
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return all(check.verdict.holds for check in self.checks)

    @property
    def uses_duality(self) -> bool:
        return any(check.verdict.permutation not in (None, Permutation.IDENTITY) for check in self.checks)


def verify_nullform_estimate(n: NullFormEstimate, p: AngleParams) -> CertificateNode:
    """
    先做角度拆分，再逐个判定乘积估计

    Raises:
        ReductionError: 由 angle_reduce 传播
    """
    emitted = angle_reduce(n, p)
    checks = tuple(CheckedEstimate(e, check_product_estimate(e.exponents)) for e in emitted)
    notes = []
    for e in emitted:
        if e.note and e.note not in notes:
            notes.append(e.note)
    node = CertificateNode(n, p, checks, tuple(notes))
    logger.debug("零形式估计 %s 参数 %s: %s", n.target_norm, p, "通过" if node.holds else "失败")
    return node
