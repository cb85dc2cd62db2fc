"""
指数与函数空间的精确运算

指数写成 base + slack·ε，其中 ε 是符号正无穷小。比较按 (base, slack) 字典序进行，
与“对所有足够小的 ε > 0 成立”的实数序一致。所有运算都在有理数上精确完成。

主要组件:
- Exponent / exp_cmp: 带无穷小的精确指数及其全序
- Space / Family: X±^{s,b}(S_T)、H^{s,b}、C([0,T];H^s) 空间
- space_embeds / space_meet / interpolate / solve_interpolation: 空间格运算
- GoalExponent / GoalSpace / goal_reached: 目标中的单侧指数类 "a-"、"a+"
"""

import dataclasses
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import ClassVar, Optional, Sequence, Tuple

import sympy

from .exceptions import ExponentError, MalformedExponentError, SpaceMismatchError

logger = logging.getLogger(__name__)


def as_fraction(value) -> Fraction:
    """
    把整数、Fraction、sympy 有理数或 "p/q" 字符串转换为 Fraction

    Raises:
        MalformedExponentError: 字符串无法解析
        ExponentError: 不支持的类型（包括浮点数，避免任何舍入）
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise MalformedExponentError(f"无法解析有理数 {value!r}: {str(e)}")
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise ExponentError(f"不支持的有理数类型: {type(value).__name__}")


@dataclass(frozen=True, eq=False)
class Exponent:
    """精确指数 base + slack·ε"""

    base: Fraction = Fraction(0)
    slack: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "base", as_fraction(self.base))
        object.__setattr__(self, "slack", as_fraction(self.slack))

    @classmethod
    def of(cls, value) -> "Exponent":
        """把 Exponent、有理数或字面量字符串统一为 Exponent"""
        if isinstance(value, Exponent):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(as_fraction(value))

    @classmethod
    def parse(cls, text: str) -> "Exponent":
        """
        解析指数字面量，例如 "3/4+1*e"、"-5/32-3e"、"7/16-1/4*e"

        Raises:
            LadderSyntaxError: 字面量语法错误
        """
        from .ladder_parser import parse_exponent
        return parse_exponent(text)

    @property
    def is_exact(self) -> bool:
        return self.slack == 0

    def value(self, eps=Fraction(0)) -> Fraction:
        """在给定的 ε 取值下求值"""
        return self.base + self.slack * as_fraction(eps)

    def scale(self, factor) -> "Exponent":
        q = as_fraction(factor)
        return Exponent(self.base * q, self.slack * q)

    def _key(self) -> Tuple[Fraction, Fraction]:
        return (self.base, self.slack)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Exponent(self.base + other.base, self.slack + other.slack)

    __radd__ = __add__

    def __neg__(self) -> "Exponent":
        return Exponent(-self.base, -self.slack)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Exponent(self.base - other.base, self.slack - other.slack)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, Exponent):
            if self.slack and other.slack:
                raise ExponentError(f"乘积 ({self})·({other}) 含 ε² 项，无法在一阶精度下表示")
            return Exponent(self.base * other.base,
                            self.base * other.slack + self.slack * other.base)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() < other._key()

    def __le__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() <= other._key()

    def __gt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() > other._key()

    def __ge__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() >= other._key()

    def __float__(self) -> float:
        # ε -> 0 的数值替代
        return float(self.base)

    def __str__(self) -> str:
        text = str(self.base)
        if self.slack:
            sign = "+" if self.slack > 0 else "-"
            magnitude = abs(self.slack)
            text += sign + ("e" if magnitude == 1 else f"{magnitude}*e")
        return text

    def __repr__(self) -> str:
        return f"Exponent({self})"


def _coerce(value):
    if isinstance(value, Exponent):
        return value
    if isinstance(value, (int, Fraction)):
        return Exponent(value)
    return NotImplemented


ZERO = Exponent(0)
HALF = Exponent(Fraction(1, 2))
ONE = Exponent(1)
EPS = Exponent(0, 1)


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def exp_cmp(a, b) -> Ordering:
    """按 (base, slack) 字典序比较两个指数"""
    a, b = Exponent.of(a), Exponent.of(b)
    if a < b:
        return Ordering.LESS
    if a > b:
        return Ordering.GREATER
    return Ordering.EQUAL


class Family(str, Enum):
    """范数族标签；X 表示对两个符号 ± 同时成立"""

    X = "X"
    X_PLUS = "X+"
    X_MINUS = "X-"
    H = "H"
    CT = "Ct"

    @property
    def is_x(self) -> bool:
        return self in (Family.X, Family.X_PLUS, Family.X_MINUS)


@dataclass(frozen=True)
class Space:
    """函数空间：族、Sobolev 指数 s、调制指数 b（Ct 没有 b）、是否限制在时间带 S_T 上"""

    family: Family
    s: Exponent
    b: Optional[Exponent] = None
    slab: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "s", Exponent.of(self.s))
        if self.family is Family.CT:
            if self.b is not None:
                raise SpaceMismatchError("Ct 空间没有调制指数 b")
        else:
            if self.b is None:
                raise SpaceMismatchError(f"{self.family.value} 空间缺少调制指数 b")
            object.__setattr__(self, "b", Exponent.of(self.b))

    @classmethod
    def x(cls, s, b, slab: bool = False, family: Family = Family.X) -> "Space":
        return cls(family, s, b, slab)

    @classmethod
    def h(cls, s, b, slab: bool = False) -> "Space":
        return cls(Family.H, s, b, slab)

    @classmethod
    def ct(cls, s, slab: bool = False) -> "Space":
        return cls(Family.CT, s, None, slab)

    def with_indices(self, s, b=None) -> "Space":
        return dataclasses.replace(self, s=Exponent.of(s), b=None if b is None else Exponent.of(b))

    def on_slab(self) -> "Space":
        return dataclasses.replace(self, slab=True)

    def __str__(self) -> str:
        inner = str(self.s) if self.b is None else f"{self.s}, {self.b}"
        return f"{self.family.value}({inner})"


class EmbeddingRule(str, Enum):
    """支撑一次嵌入的规则；除单调性外都是公理"""

    MONOTONE = "monotone"
    SLAB = "slab-embedding"
    X_H = "x-h-embedding"
    CONTINUITY = "continuity-embedding"

    @property
    def axiom(self) -> Optional[str]:
        return None if self is EmbeddingRule.MONOTONE else self.value


def _sign_compatible(source: Family, target: Family) -> bool:
    if {source, target} == {Family.X_PLUS, Family.X_MINUS}:
        raise SpaceMismatchError(f"{source.value} 与 {target.value} 之间不能传递指数")
    return source is target or source is Family.X


def embedding_rule(a: Space, b: Space) -> Optional[EmbeddingRule]:
    """
    判断空间 a 是否嵌入空间 b，并返回所用的规则

    Args:
        a: 已知的空间
        b: 目标空间

    Returns:
        嵌入规则；不嵌入时返回 None

    Raises:
        SpaceMismatchError: X+ 与 X- 混用
    """
    if a.slab and not b.slab:
        return None
    if a.family.is_x and b.family.is_x:
        if not _sign_compatible(a.family, b.family):
            return None
        return EmbeddingRule.MONOTONE if a.s >= b.s and a.b >= b.b else None
    if a.family is b.family:
        if a.s < b.s or (b.b is not None and a.b < b.b):
            return None
        return EmbeddingRule.MONOTONE
    if a.family.is_x and b.family is Family.H:
        if b.b >= ZERO and a.s >= b.s and a.b >= b.b:
            return EmbeddingRule.X_H
        return None
    if b.family is Family.CT:
        # X± 与 H 在 b > 1/2 时都连续取值于 H^s
        if a.b > HALF and a.s >= b.s:
            return EmbeddingRule.CONTINUITY
        return None
    if a.family is Family.CT:
        # 有限时间带上 C([0,T];H^s) ⊂ L²_t H^s = X^{s,0}(S_T)
        if b.slab and b.b <= ZERO and a.s >= b.s:
            return EmbeddingRule.SLAB
        return None
    return None


def space_embeds(a: Space, b: Space) -> bool:
    """空间 a 中的成员关系是否蕴含空间 b 中的成员关系"""
    return embedding_rule(a, b) is not None


def _require_same_shape(spaces: Sequence[Space]) -> None:
    first = spaces[0]
    for other in spaces[1:]:
        if other.family is not first.family or other.slab != first.slab:
            raise SpaceMismatchError(f"空间 {first} 与 {other} 的族或时间带标记不一致")


def space_meet(spaces: Sequence[Space]) -> Space:
    """
    同族空间的交：逐坐标取最小指数

    Raises:
        SpaceMismatchError: 空列表，或族、时间带标记不一致
    """
    spaces = list(spaces)
    if not spaces:
        raise SpaceMismatchError("不能对空列表求交")
    _require_same_shape(spaces)
    first = spaces[0]
    s = min(space.s for space in spaces)
    b = None if first.b is None else min(space.b for space in spaces)
    return Space(first.family, s, b, first.slab)


def interpolate(a: Space, b: Space, theta) -> Space:
    """
    复插值 [b, a]_θ：s = θ·a.s + (1-θ)·b.s，b 同理

    θ 可以带 ε 分量（例如 1/4+2ε），只要 a 与 b 的差不含 ε。

    Raises:
        SpaceMismatchError: 两端空间形状不一致
        ExponentError: θ 不在 [0,1] 内，或出现 ε² 项
    """
    _require_same_shape([a, b])
    theta = Exponent.of(theta)
    if theta < ZERO or theta > ONE:
        raise ExponentError(f"插值参数 θ={theta} 不在 [0,1] 内")
    s = b.s + theta * (a.s - b.s)
    modulation = None if a.b is None else b.b + theta * (a.b - b.b)
    return Space(a.family, s, modulation, a.slab)


def _sympy_rational(q: Fraction) -> sympy.Rational:
    return sympy.Rational(q.numerator, q.denominator)


def solve_interpolation(a: Space, b: Space, target: Space,
                        coordinates: Tuple[str, ...] = ("s", "b")) -> Optional[Exponent]:
    """
    求 θ = θ0 + θ1·ε 使 interpolate(a, b, θ) 与 target 在给定坐标上完全相等

    对每个坐标，常数项、ε 项和 ε² 项各给出一个关于 (θ0, θ1) 的线性方程，用 sympy 求解。
    解不唯一时取 θ1 = 0，再取 θ0 = 1。

    Args:
        a: θ = 1 端的空间
        b: θ = 0 端的空间
        target: 目标空间
        coordinates: 参与求解的坐标

    Returns:
        θ；方程组无解或 θ 不在 [0,1] 内时返回 None
    """
    if target.family is not a.family or target.slab != a.slab:
        return None
    _require_same_shape([a, b])
    t0, t1 = sympy.symbols("theta_0 theta_1")
    equations = []
    for name in coordinates:
        ea, eb, et = getattr(a, name), getattr(b, name), getattr(target, name)
        if ea is None:
            continue
        d_base = _sympy_rational(ea.base - eb.base)
        d_slack = _sympy_rational(ea.slack - eb.slack)
        equations.append(t0 * d_base - _sympy_rational(et.base - eb.base))
        equations.append(t0 * d_slack + t1 * d_base - _sympy_rational(et.slack - eb.slack))
        equations.append(t1 * d_slack)

    if not equations:
        return None
    solution = next(iter(sympy.linsolve(equations, [t0, t1])), None)
    if solution is None:
        return None
    theta0, theta1 = solution
    theta1 = theta1.subs(t1, 0)
    theta0 = theta0.subs(t1, 0)
    theta0, theta1 = theta0.subs(t0, 1), theta1.subs(t0, 1)
    if not (theta0.is_Rational and theta1.is_Rational):
        return None

    theta = Exponent(as_fraction(theta0), as_fraction(theta1))
    if theta < ZERO or theta > ONE:
        return None
    try:
        result = interpolate(a, b, theta)
    except ExponentError:
        return None
    if any(getattr(result, name) != getattr(target, name) for name in coordinates
           if getattr(a, name) is not None):
        return None
    logger.debug("插值参数 θ=%s: [%s, %s] -> %s", theta, b, a, target)
    return theta


class Side(str, Enum):
    EXACT = ""
    MINUS = "-"
    PLUS = "+"


@dataclass(frozen=True)
class GoalExponent:
    """目标中的单侧指数类："a-" 表示 a-δ，"a+" 表示 a+δ，δ 足够小"""

    base: Fraction
    side: Side = Side.EXACT

    def representative(self, value: Optional[Exponent], budget: int) -> Optional[Exponent]:
        """
        为已知指数 value 选取该类中的代表元

        "a-" 取 a - Kε（类中最弱的元素），"a+" 取 min(value, a + Kε) 且须严格大于 a。
        """
        center = Exponent(self.base)
        if self.side is Side.EXACT:
            return center
        if self.side is Side.MINUS:
            return center - EPS.scale(budget)
        if value is None:
            return None
        candidate = min(value, center + EPS.scale(budget))
        return candidate if candidate > center else None

    def __str__(self) -> str:
        return f"{self.base}{self.side.value}"


@dataclass(frozen=True)
class GoalSpace:
    family: Family
    s: GoalExponent
    b: Optional[GoalExponent] = None
    slab: bool = False

    DEFAULT_SLACK_BUDGET: ClassVar[int] = 100

    def __str__(self) -> str:
        inner = str(self.s) if self.b is None else f"{self.s}, {self.b}"
        return f"{self.family.value}({inner})"


def goal_reached(space: Space, goal: GoalSpace, budget: int = GoalSpace.DEFAULT_SLACK_BUDGET) -> Optional[Space]:
    """
    判断已知成员空间是否达到目标

    Returns:
        达到时返回目标类中的代表空间，否则返回 None
    """
    s = goal.s.representative(space.s, budget)
    b = None
    if goal.b is not None:
        b = goal.b.representative(space.b, budget)
        if b is None:
            return None
    if s is None:
        return None
    representative = Space(goal.family, s, b, goal.slab)
    return representative if space_embeds(space, representative) else None
