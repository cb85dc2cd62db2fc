"""
证明脚本的数据结构

脚本由符号声明、假设、步骤和目标组成；所有成员关系都位于时间带 S_T 上。
"""

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple

from .exponent_core import Exponent, GoalSpace, Space


class SymbolKind(str, Enum):
    SPINOR = "spinor"
    HOMOGENEOUS_SPINOR = "homogeneous-spinor"
    LINEAR_SPINOR = "linear-spinor"
    BILINEAR_SPINOR = "bilinear-spinor"
    SCALAR = "scalar"
    HOMOGENEOUS_SCALAR = "homogeneous-scalar"
    BILINEAR_SCALAR = "bilinear-scalar"

    @property
    def field_name(self) -> str:
        return "spinor" if self.value.endswith("spinor") else "scalar"

    @property
    def role(self) -> str:
        """full 表示完整的场，其余为分解中的一部分"""
        return self.value.split("-")[0] if "-" in self.value else "full"


@dataclass(frozen=True)
class Declaration:
    name: str
    kind: SymbolKind
    line: Optional[int] = None


@dataclass(frozen=True)
class RefItem:
    """引用：步骤/假设编号、符号名，或带参数的源函数（如 sobolev_time_product(H2, H1)）"""

    name: str
    args: Tuple["RefItem", ...] = ()
    line: Optional[int] = None
    column: Optional[int] = None

    def leaves(self) -> Tuple["RefItem", ...]:
        if not self.args:
            return (self,)
        return tuple(leaf for arg in self.args for leaf in arg.leaves())

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(str(arg) for arg in self.args)})"


@dataclass(frozen=True)
class TacticCall:
    name: str
    refs: Tuple[RefItem, ...] = ()
    source: Optional[RefItem] = None
    angle: Optional[Tuple[Exponent, Exponent, Exponent]] = None
    theta: Optional[Exponent] = None
    grid: Optional[int] = None
    slab: bool = False
    notes: Tuple[str, ...] = ()
    line: Optional[int] = None
    column: Optional[int] = None

    def options(self) -> FrozenSet[str]:
        """本次调用实际使用的选项名"""
        used = set()
        if self.source is not None:
            used.add("from")
        if self.angle is not None:
            used.add("angle")
        if self.theta is not None:
            used.add("theta")
        if self.grid is not None:
            used.add("grid")
        if self.slab:
            used.add("slab")
        if self.notes:
            used.add("note")
        return frozenset(used)

    def all_refs(self) -> Tuple[RefItem, ...]:
        refs = list(self.refs)
        if self.source is not None:
            refs.append(self.source)
        return tuple(refs)

    def __str__(self) -> str:
        parts = [self.name + (f"({', '.join(str(r) for r in self.refs)})" if self.refs else "")]
        if self.source is not None:
            parts.append(f"from {self.source}")
        if self.angle is not None:
            parts.append(f"angle({', '.join(str(p) for p in self.angle)})")
        if self.theta is not None:
            parts.append(f"theta {self.theta}")
        if self.grid is not None:
            parts.append(f"grid {self.grid}")
        if self.slab:
            parts.append("slab")
        return " ".join(parts)


@dataclass(frozen=True)
class Hypothesis:
    id: str
    symbol: str
    space: Space
    axiom: str
    line: Optional[int] = None


@dataclass(frozen=True)
class Step:
    id: str
    symbol: str
    space: Space
    tactic: TacticCall
    line: Optional[int] = None


@dataclass(frozen=True)
class Goal:
    id: str
    symbol: str
    space: GoalSpace
    line: Optional[int] = None


@dataclass(frozen=True)
class Ladder:
    declarations: Tuple[Declaration, ...] = ()
    hypotheses: Tuple[Hypothesis, ...] = ()
    steps: Tuple[Step, ...] = ()
    goals: Tuple[Goal, ...] = ()
    source: str = field(default="", compare=False)

    @property
    def digest(self) -> str:
        """脚本源文本的 sha256"""
        return hashlib.sha256(self.source.encode("utf-8")).hexdigest()

    def kinds(self) -> Dict[str, SymbolKind]:
        return {d.name: d.kind for d in self.declarations}
