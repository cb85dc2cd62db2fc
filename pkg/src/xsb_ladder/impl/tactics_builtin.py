"""
内置策略

- axiom: 直接按公理接受结论
- embed: 空间嵌入（单调性、时间带嵌入、X-H 嵌入、连续性嵌入）
- energy: 线性能量估计，源项来自已知成员关系或 sobolev_time_product(φ, ψ)
- meet: 由场分解 ψ = ψ^h + ψ^l + Ψ、φ = φ^h + Φ 求交
- interpolate: 同一符号两个成员关系之间的复插值
- bilinear_kg / bilinear_dirac: 能量估计 + 角度拆分 + 乘积估计
"""

import logging
from typing import List, Optional, Tuple

from .angle_search import scan_angle_params
from .exceptions import ReductionError, SpaceMismatchError, UnknownReferenceError
from .exponent_core import (
    EmbeddingRule, Exponent, Family, ONE, ZERO, Space, embedding_rule, interpolate,
    solve_interpolation, space_embeds, space_meet,
)
from .ladder_model import RefItem, Step, SymbolKind, TacticCall
from .product_rules import IndexPair, check_sobolev_time_product
from .reduction_engine import (
    AngleParams, Nonlinearity, NullFormEstimate, dirac_estimate, dualize, energy_step, klein_gordon_estimate,
    verify_nullform_estimate,
)
from .tactics_base import BaseTactic, LadderState, Membership, ScanRecord, TacticResult

logger = logging.getLogger(__name__)

SLAB_AXIOM = EmbeddingRule.SLAB.value
ENERGY_AXIOM = "energy-estimate"
SOBOLEV_AXIOM = "holder-sobolev"
ANGLE_AXIOM = "angle-lemma"
PRODUCT_AXIOM = "product-theorem"
DUALITY_AXIOM = "trilinear-duality"


def _failure(message: str, **kwargs) -> TacticResult:
    return TacticResult(holds=False, error=message, **kwargs)


class AxiomTactic(BaseTactic):
    """
    直接引用一条公理

    嵌入类公理要求该符号已有成员关系按同名规则嵌入结论；energy-estimate 只给出齐次部分，
    初值取完整场的 Ct 成员关系。其余公理只在双线性与能量步骤内部使用。
    """

    NAME = "axiom"
    MIN_REFS = 1
    MAX_REFS = 1
    CHECK_REFS = False
    EMBEDDING_AXIOMS = (SLAB_AXIOM, EmbeddingRule.X_H.value, EmbeddingRule.CONTINUITY.value)
    KNOWN_AXIOMS = EMBEDDING_AXIOMS + (ENERGY_AXIOM, SOBOLEV_AXIOM, ANGLE_AXIOM, PRODUCT_AXIOM, DUALITY_AXIOM)

    def validate(self, call: TacticCall) -> None:
        super().validate(call)
        ref = call.refs[0]
        if ref.name not in self.KNOWN_AXIOMS:
            raise UnknownReferenceError(f"未知的公理: {ref.name}", ref.line, ref.column, self.KNOWN_AXIOMS)

    @staticmethod
    def _embedding(name: str, step: Step, state: LadderState) -> TacticResult:
        for m in state.memberships_of(step.symbol):
            try:
                rule = embedding_rule(m.space, step.space)
            except SpaceMismatchError:
                continue
            if rule is not None and rule.value == name:
                return TacticResult(holds=True, established=step.space, inputs=(m.id,), axioms=(name,),
                                    notes=[f"按公理 {name}: {m.space} ⊂ {step.space}"])
        return _failure(f"公理 {name} 不能由 {step.symbol} 的已知成员关系推出 {step.space}")

    @staticmethod
    def _homogeneous(step: Step, state: LadderState) -> TacticResult:
        kind = state.kinds[step.symbol]
        if kind.role != "homogeneous":
            return _failure(f"公理 {ENERGY_AXIOM} 只给出齐次部分的成员关系，而 {step.symbol} 是 {kind.value}")
        if not (step.space.family.is_x and step.space.slab):
            return _failure(f"齐次部分的能量估计给出时间带上的 X 空间，而不是 {step.space}")
        data = [m for name in state.full_of(kind.field_name) for m in state.memberships_of(name)
                if m.space.family is Family.CT and m.space.s >= step.space.s]
        if not data:
            return _failure(f"{kind.field_name} 场没有 H^{step.space.s} 初值")
        return TacticResult(holds=True, established=step.space, inputs=(data[0].id,), axioms=(ENERGY_AXIOM,),
                            notes=[f"齐次解，初值 {data[0].id}: {data[0].space}"])

    def apply(self, step: Step, state: LadderState) -> TacticResult:
        ref = step.tactic.refs[0]
        if ref.name not in self.KNOWN_AXIOMS:
            raise UnknownReferenceError(f"未知的公理: {ref.name}", ref.line, ref.column, self.KNOWN_AXIOMS)
        if ref.name in self.EMBEDDING_AXIOMS:
            return self._embedding(ref.name, step, state)
        if ref.name == ENERGY_AXIOM:
            return self._homogeneous(step, state)
        return _failure(f"公理 {ref.name} 不直接给出成员关系，只能在双线性或能量步骤中使用")


class EmbedTactic(BaseTactic):
    """嵌入；未给出引用时在该符号的全部成员关系中查找"""

    NAME = "embed"
    ACCEPTED_OPTIONS = frozenset({"slab"})
    MAX_REFS = 1

    def _candidates(self, step: Step, state: LadderState) -> List[Membership]:
        if not step.tactic.refs:
            return state.memberships_of(step.symbol)
        ref = step.tactic.refs[0]
        if ref.name in state.kinds:
            return state.memberships_of(ref.name)
        return [state.lookup(ref.name)]

    def apply(self, step: Step, state: LadderState) -> TacticResult:
        candidates = self._candidates(step, state)
        self.require_same_symbol(step, candidates)
        skipped_slab = False
        for m in candidates:
            try:
                rule = embedding_rule(m.space, step.space)
            except SpaceMismatchError:
                continue
            if rule is None:
                continue
            if rule is EmbeddingRule.SLAB and not step.tactic.slab:
                skipped_slab = True
                continue
            axioms = (rule.axiom,) if rule.axiom else ()
            return TacticResult(holds=True, established=step.space, inputs=(m.id,), axioms=axioms,
                                notes=[f"{m.space} ⊂ {step.space} ({rule.value})"])
        if skipped_slab:
            return _failure(f"{step.space} 需要时间带嵌入，请加上 slab 选项")
        return _failure(f"没有已知成员关系嵌入 {step.space}")


class EnergyTactic(BaseTactic):
    """
    线性能量估计，源项必须是结论符号所满足方程的右端：
    线性部分 ψ^l 的源项是完整的 ψ，双线性部分 Ψ 的源项是 sobolev_time_product(φ, ψ)。
    其余符号的右端是双线性的或为零，分别由 bilinear_kg / bilinear_dirac 与公理给出。
    """

    NAME = "energy"
    ACCEPTED_OPTIONS = frozenset({"from"})
    REQUIRED_OPTIONS = frozenset({"from"})
    MAX_REFS = 0
    # 以已知成员关系为源项时，结论符号类别到源项符号类别
    MEMBERSHIP_SOURCES = {SymbolKind.LINEAR_SPINOR: SymbolKind.SPINOR}
    PRODUCT_SOURCES = frozenset({SymbolKind.BILINEAR_SPINOR})
    HINTS = {
        SymbolKind.BILINEAR_SCALAR: "bilinear_kg",
        SymbolKind.BILINEAR_SPINOR: "bilinear_dirac 或 from sobolev_time_product(φ, ψ)",
    }

    def _rejected(self, kind: SymbolKind, reason: str) -> ReductionError:
        hint = self.HINTS.get(kind)
        return ReductionError(reason + (f"，请使用 {hint}" if hint else ""))

    def _membership_source(self, step: Step, state: LadderState) -> Membership:
        kind = state.kinds[step.symbol]
        expected = self.MEMBERSHIP_SOURCES.get(kind)
        if expected is None:
            raise self._rejected(kind, f"{step.symbol} ({kind.value}) 的方程右端不是已知的成员关系")
        m = state.resolve(step.tactic.source)
        if m.symbol == step.symbol:
            raise ReductionError(f"{step.symbol} 不能作为自身能量估计的源项")
        if state.kinds[m.symbol] is not expected:
            raise ReductionError(f"{step.symbol} 的源项必须是 {expected.value} 类别的符号，而 {m.symbol} 不是")
        return m

    @staticmethod
    def _continuous(ref: RefItem, state: LadderState) -> Membership:
        if ref.name in state.kinds:
            candidates = [m for m in state.memberships_of(ref.name) if m.space.family is Family.CT]
            if not candidates:
                raise ReductionError(f"{ref.name} 没有 Ct 成员关系")
            m = max(candidates, key=lambda m: m.space.s)
        else:
            m = state.lookup(ref.name)
            if m.space.family is not Family.CT:
                raise ReductionError(f"{m.id} 不是 Ct 成员关系: {m.space}")
        if state.kinds[m.symbol].role != "full":
            raise ReductionError(f"sobolev_time_product 的参数必须是完整的场，而 {m.symbol} 不是")
        return m

    def _product_source(self, step: Step, state: LadderState) -> Tuple[Optional[Space], TacticResult]:
        phi_ref, psi_ref = step.tactic.source.args
        phi, psi = self._continuous(phi_ref, state), self._continuous(psi_ref, state)
        if state.field_of(phi.symbol) != "scalar" or state.field_of(psi.symbol) != "spinor":
            raise ReductionError("sobolev_time_product 的参数依次为标量场与旋量场")
        s0 = -step.space.s
        inputs = (phi.id, psi.id)
        if not check_sobolev_time_product(s0, phi.space.s, psi.space.s):
            return None, _failure(
                f"H^{phi.space.s}·H^{psi.space.s} ⊂ H^{step.space.s} 不满足 Hölder-Sobolev 充分条件",
                inputs=inputs)
        note = f"H^{phi.space.s}·H^{psi.space.s} ⊂ H^{step.space.s}，源项位于 X({step.space.s}, 0)"
        return Space.x(step.space.s, ZERO, slab=True), TacticResult(
            holds=True, inputs=inputs, axioms=(SOBOLEV_AXIOM, SLAB_AXIOM), notes=[note])

    def apply(self, step: Step, state: LadderState) -> TacticResult:
        if not step.space.family.is_x:
            raise ReductionError(f"能量估计的结论必须位于 X 空间: {step.space}")
        source = step.tactic.source
        if source.args:
            kind = state.kinds[step.symbol]
            if kind not in self.PRODUCT_SOURCES:
                raise self._rejected(kind, f"sobolev_time_product 不是 {step.symbol} ({kind.value}) 的源项")
            source_space, partial = self._product_source(step, state)
            if source_space is None:
                return partial
        else:
            m = self._membership_source(step, state)
            source_space = m.space
            partial = TacticResult(holds=True, inputs=(m.id,))
        established = energy_step(source_space, step.space.b)
        partial.established = established
        partial.axioms = partial.axioms + (ENERGY_AXIOM,)
        if not space_embeds(established, step.space):
            partial.holds = False
            partial.error = f"能量估计给出 {established}，不蕴含 {step.space}"
        return partial


class MeetTactic(BaseTactic):
    NAME = "meet"
    MIN_REFS = 1

    def apply(self, step: Step, state: LadderState) -> TacticResult:
        cited = [state.resolve(ref) for ref in step.tactic.refs]
        symbols = [m.symbol for m in cited]
        if len(set(symbols)) != len(symbols) or step.symbol in symbols:
            raise ReductionError(f"meet 的引用必须来自不同的符号且不含结论符号: {', '.join(symbols)}")
        field_name = state.field_of(step.symbol)
        group = state.group_of(field_name)
        if set(symbols) | {step.symbol} != group:
            return _failure(f"{step.symbol} 与 {', '.join(symbols)} 不构成 {field_name} 场的完整分解",
                            inputs=tuple(m.id for m in cited))
        established = space_meet([m.space for m in cited])
        result = TacticResult(holds=True, established=established, inputs=tuple(m.id for m in cited),
                              notes=[f"{step.symbol} 由 {', '.join(symbols)} 经场分解求交"])
        if not space_embeds(established, step.space):
            result.holds = False
            result.error = f"求交得到 {established}，不蕴含 {step.space}"
        return result


class InterpolateTactic(BaseTactic):
    NAME = "interpolate"
    ACCEPTED_OPTIONS = frozenset({"theta"})
    MIN_REFS = 2
    MAX_REFS = 2

    @staticmethod
    def _thetas(a: Space, b: Space, claim: Space, given: Optional[Exponent]) -> List[Exponent]:
        if given is not None:
            return [given]
        thetas = []
        for coordinates in (("s", "b"), ("s",), ("b",)):
            theta = solve_interpolation(a, b, claim, coordinates)
            if theta is not None and theta not in thetas:
                thetas.append(theta)
        thetas.extend(t for t in (ONE, ZERO) if t not in thetas)
        return thetas

    def apply(self, step: Step, state: LadderState) -> TacticResult:
        a, b = (state.resolve(ref) for ref in step.tactic.refs)
        self.require_same_symbol(step, [a, b])
        inputs = (a.id, b.id)
        for theta in self._thetas(a.space, b.space, step.space, step.tactic.theta):
            established = interpolate(a.space, b.space, theta)
            if space_embeds(established, step.space):
                return TacticResult(holds=True, established=established, inputs=inputs, theta=theta,
                                    notes=[f"[{b.id}, {a.id}]_θ，θ = {theta}"])
        return _failure(f"{a.id} 与 {b.id} 之间的插值不蕴含 {step.space}", inputs=inputs)


class _BilinearTactic(BaseTactic):
    ACCEPTED_OPTIONS = frozenset({"angle", "grid"})
    DEFAULT_GRID = 8
    SOURCE_FIELD = ""
    CLAIM_FIELD = ""

    def _check_claim(self, step: Step, state: LadderState) -> None:
        if state.field_of(step.symbol) != self.CLAIM_FIELD:
            raise ReductionError(f"{self.NAME} 的结论必须属于 {self.CLAIM_FIELD} 场，而 {step.symbol} 不是")
        if not step.space.family.is_x:
            raise ReductionError(f"双线性步骤的结论必须位于 X 空间: {step.space}")
        # 源项位于 X^{s,b-1} 时由能量估计得到结论
        energy_step(Space(step.space.family, step.space.s, step.space.b - ONE, slab=True), step.space.b)

    @staticmethod
    def _factor(state: LadderState, cited: Optional[Membership], field_name: str) -> Tuple[IndexPair, Tuple[str, ...]]:
        if cited is None:
            cited = state.latest_of_role(field_name, "bilinear")
            if cited is None:
                raise ReductionError(f"{field_name} 场的双线性部分还没有 X 成员关系")
        if not cited.space.family.is_x:
            raise ReductionError(f"因子 {cited.id} 必须位于 X 空间: {cited.space}")
        space, binding = state.field_factor(cited)
        return IndexPair(space.s, space.b), binding

    def _estimate(self, step: Step, state: LadderState) -> Tuple[NullFormEstimate, Tuple[str, ...]]:
        raise NotImplementedError("子类必须实现_estimate方法")

    def apply(self, step: Step, state: LadderState) -> TacticResult:
        self._check_claim(step, state)
        n, binding = self._estimate(step, state)
        call = step.tactic
        scan = None
        if call.angle is not None:
            params = AngleParams(*call.angle)
        else:
            grid = call.grid or self.DEFAULT_GRID
            result = scan_angle_params(n, grid)
            scan = ScanRecord(result.scanned, result.candidates, grid)
            params = result.params
            if params is None:
                return _failure(f"网格 1/{grid} 上没有可用的角度参数", binding=binding, scan=scan)
        node = verify_nullform_estimate(n, params)
        axioms = [ENERGY_AXIOM, ANGLE_AXIOM, EmbeddingRule.X_H.value, PRODUCT_AXIOM]
        if node.uses_duality or n.source is Nonlinearity.DIRAC:
            axioms.append(DUALITY_AXIOM)
        result = TacticResult(holds=node.holds, established=step.space, inputs=binding, binding=binding,
                              angle=params, scan=scan, nodes=(node,), notes=list(node.notes),
                              axioms=tuple(axioms))
        if not node.holds:
            failed = [c.emitted.origin for c in node.checks if not c.verdict.holds]
            result.error = f"乘积估计不成立: {', '.join(failed)}"
        return result


class BilinearKleinGordonTactic(_BilinearTactic):
    """Φ 的源项 ⟨D⟩^{-1}⟨βψ, ψ⟩"""

    NAME = "bilinear_kg"
    MAX_REFS = 1
    CLAIM_FIELD = "scalar"

    def _estimate(self, step, state):
        cited = state.resolve(step.tactic.refs[0]) if step.tactic.refs else None
        if cited is not None and state.field_of(cited.symbol) != "spinor":
            raise ReductionError(f"{self.NAME} 的因子必须属于旋量场，而 {cited.symbol} 不是")
        factor, binding = self._factor(state, cited, "spinor")
        return klein_gordon_estimate(step.space, factor), binding


class BilinearDiracTactic(_BilinearTactic):
    """Ψ 的源项 P(φβψ)，经对偶改写为零形式估计"""

    NAME = "bilinear_dirac"
    MAX_REFS = 2
    CLAIM_FIELD = "spinor"

    def _estimate(self, step, state):
        cited = {"scalar": None, "spinor": None}
        for ref in step.tactic.refs:
            m = state.resolve(ref)
            field_name = state.field_of(m.symbol)
            if cited[field_name] is not None:
                raise ReductionError(f"{self.NAME} 的两个引用都属于 {field_name} 场")
            cited[field_name] = m
        phi, phi_binding = self._factor(state, cited["scalar"], "scalar")
        psi, psi_binding = self._factor(state, cited["spinor"], "spinor")
        return dualize(dirac_estimate(step.space, phi, psi)), psi_binding + phi_binding


BUILTIN_TACTICS = (
    AxiomTactic,
    EmbedTactic,
    EnergyTactic,
    MeetTactic,
    InterpolateTactic,
    BilinearKleinGordonTactic,
    BilinearDiracTactic,
)
