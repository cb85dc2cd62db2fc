import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple

from .exceptions import ReductionError, UnknownReferenceError
from .exponent_core import Space, space_embeds, space_meet
from .ladder_model import RefItem, Step, SymbolKind, TacticCall
from .reduction_engine import AngleParams, CertificateNode

logger = logging.getLogger(__name__)


class Membership(NamedTuple):
    """已确立的成员关系 symbol ∈ space，id 为假设或步骤编号"""

    id: str
    symbol: str
    space: Space


class LadderState:
    """验证过程中累积的成员关系；同一符号可以有多个成员关系"""

    def __init__(self, kinds: Dict[str, SymbolKind]):
        self.kinds = dict(kinds)
        self.memberships: List[Membership] = []
        self._by_id: Dict[str, Membership] = {}

    def add(self, membership: Membership) -> None:
        self.memberships.append(membership)
        self._by_id[membership.id] = membership

    def lookup(self, ident: str) -> Membership:
        membership = self._by_id.get(ident)
        if membership is None:
            raise UnknownReferenceError(f"编号 {ident} 没有已确立的成员关系")
        return membership

    def memberships_of(self, symbol: str) -> List[Membership]:
        return [m for m in self.memberships if m.symbol == symbol]

    def resolve(self, ref: RefItem) -> Membership:
        """
        把引用解析为成员关系：编号直接查找，符号名取该符号最近确立的 X 族成员关系

        Raises:
            UnknownReferenceError: 引用无法解析
        """
        if ref.name in self._by_id:
            return self._by_id[ref.name]
        if ref.name in self.kinds:
            candidates = [m for m in self.memberships_of(ref.name) if m.space.family.is_x]
            if candidates:
                return candidates[-1]
        raise UnknownReferenceError(f"引用 {ref.name} 没有可用的成员关系", ref.line, ref.column)

    def field_of(self, symbol: str) -> str:
        return self.kinds[symbol].field_name

    def parts_of(self, field_name: str) -> List[str]:
        """场分解中的各部分（不含完整的场本身），按声明顺序"""
        return [name for name, kind in self.kinds.items()
                if kind.field_name == field_name and kind.role != "full"]

    def full_of(self, field_name: str) -> List[str]:
        return [name for name, kind in self.kinds.items()
                if kind.field_name == field_name and kind.role == "full"]

    def group_of(self, field_name: str) -> FrozenSet[str]:
        return frozenset(name for name, kind in self.kinds.items() if kind.field_name == field_name)

    def latest_of_role(self, field_name: str, role: str) -> Optional[Membership]:
        for name, kind in self.kinds.items():
            if kind.field_name == field_name and kind.role == role:
                candidates = [m for m in self.memberships_of(name) if m.space.family.is_x]
                if candidates:
                    return candidates[-1]
        return None

    def field_factor(self, cited: Membership) -> Tuple[Space, Tuple[str, ...]]:
        """
        由某一部分的成员关系推出完整场的成员关系

        对每个其他部分，取第一个至少与 cited 一样强的成员关系；
        没有时取与 cited 之交最大的成员关系。结果为这些空间的交。

        Returns:
            (完整场所在空间, 参与求交的成员关系编号)

        Raises:
            ReductionError: 某个部分没有可用的成员关系
        """
        kind = self.kinds[cited.symbol]
        if kind.role == "full":
            return cited.space, (cited.id,)
        spaces = [cited.space]
        binding = [cited.id]
        for part in self.parts_of(kind.field_name):
            if part == cited.symbol:
                continue
            shaped = [m for m in self.memberships_of(part)
                      if m.space.family is cited.space.family and m.space.slab == cited.space.slab]
            if not shaped:
                raise ReductionError(f"{part} 没有与 {cited.space} 同族的成员关系，无法控制完整的场")
            chosen = next((m for m in shaped if space_embeds(m.space, cited.space)), None)
            if chosen is None:
                chosen = max(shaped, key=lambda m: (space_meet([m.space, cited.space]).s,
                                                    space_meet([m.space, cited.space]).b))
            spaces.append(chosen.space)
            binding.append(chosen.id)
        return space_meet(spaces), tuple(binding)


class ScanRecord(NamedTuple):
    scanned: int
    candidates: int
    grid: int


@dataclass
class TacticResult:
    """单个步骤的验证结果"""

    holds: bool
    established: Optional[Space] = None
    inputs: Tuple[str, ...] = ()
    binding: Tuple[str, ...] = ()
    angle: Optional[AngleParams] = None
    theta: Optional[object] = None
    scan: Optional[ScanRecord] = None
    nodes: Tuple[CertificateNode, ...] = ()
    notes: List[str] = field(default_factory=list)
    axioms: Tuple[str, ...] = ()
    error: Optional[str] = None


class BaseTactic:
    """策略基类，定义接口和通用的参数检查"""

    NAME = ""
    # 除 note 外可以使用的选项
    ACCEPTED_OPTIONS: FrozenSet[str] = frozenset()
    REQUIRED_OPTIONS: FrozenSet[str] = frozenset()
    MIN_REFS = 0
    MAX_REFS: Optional[int] = None
    # 为 False 时引用按名称原样使用，不检查是否已定义
    CHECK_REFS = True

    def validate(self, call: TacticCall) -> None:
        """
        检查调用的选项与引用个数

        Raises:
            UnknownReferenceError: 使用了不被接受的选项、缺少必需选项或引用个数不符
        """
        extra = call.options() - self.ACCEPTED_OPTIONS - {"note"}
        if extra:
            allowed = sorted(self.ACCEPTED_OPTIONS | {"note"})
            raise UnknownReferenceError(f"策略 {self.NAME} 不接受选项 {', '.join(sorted(extra))}",
                                        call.line, call.column, allowed)
        missing = self.REQUIRED_OPTIONS - call.options()
        if missing:
            raise UnknownReferenceError(f"策略 {self.NAME} 缺少选项 {', '.join(sorted(missing))}",
                                        call.line, call.column)
        count = len(call.refs)
        if count < self.MIN_REFS or (self.MAX_REFS is not None and count > self.MAX_REFS):
            upper = "任意" if self.MAX_REFS is None else str(self.MAX_REFS)
            raise UnknownReferenceError(
                f"策略 {self.NAME} 需要 {self.MIN_REFS} 到 {upper} 个引用，实际为 {count}",
                call.line, call.column)
        for ref in call.refs:
            if ref.args:
                raise UnknownReferenceError(f"策略 {self.NAME} 的引用不能带参数: {ref}",
                                            ref.line, ref.column)

    def apply(self, step: Step, state: LadderState) -> TacticResult:
        """
        验证步骤

        Args:
            step: 待验证的步骤
            state: 当前已确立的成员关系

        Returns:
            验证结果
        """
        raise NotImplementedError("子类必须实现apply方法")

    @staticmethod
    def require_same_symbol(step: Step, memberships: List[Membership]) -> None:
        for m in memberships:
            if m.symbol != step.symbol:
                raise ReductionError(f"{m.id} 属于 {m.symbol}，而步骤结论属于 {step.symbol}")
