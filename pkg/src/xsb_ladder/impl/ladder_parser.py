"""
证明脚本解析器

基于 lark 的 LALR 文法，按行组织，以 # 开头的内容为注释:

    symbol Psi kind bilinear-spinor
    hyp  H1: psi in Ct(0)                axiom class-space
    step S7: Psi in X(-1/8-1*e, 1/4+2*e) by interpolate(S4, S3)
    goal G1: psi in X(-5/32-, 1/2+)
"""

import ast
import logging
from fractions import Fraction
from typing import List, Set

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, VisitError

from .exceptions import (
    DuplicateIdentifierError, LadderSyntaxError, MalformedExponentError,
    SpaceMismatchError, UnknownReferenceError, XsbLadderError,
)
from .exponent_core import Exponent, Family, GoalExponent, GoalSpace, Side, Space
from .ladder_model import (
    Declaration, Goal, Hypothesis, Ladder, RefItem, Step, SymbolKind, TacticCall,
)

logger = logging.getLogger(__name__)

GRAMMAR = r"""
    document: (_NL | statement _NL)*

    ?statement: declaration | hypothesis | step | goal
    declaration: "symbol" IDENT "kind" IDENT
    hypothesis: "hyp" IDENT ":" IDENT "in" space "axiom" IDENT
    step: "step" IDENT ":" IDENT "in" space "by" tactic
    goal: "goal" IDENT ":" IDENT "in" goal_space

    tactic: IDENT [refs] option*
    refs: "(" [ref_item ("," ref_item)*] ")"
    ref_item: IDENT [refs]

    ?option: from_option | angle_option | theta_option | grid_option | slab_option | note_option
    from_option: "from" ref_item
    angle_option: "angle" "(" exponent "," exponent "," exponent ")"
    theta_option: "theta" exponent
    grid_option: "grid" INT
    slab_option: "slab"
    note_option: "note" ESCAPED_STRING

    space: FAMILY "(" exponent ["," exponent] ")"
    goal_space: FAMILY "(" goal_exponent ["," goal_exponent] ")"

    exponent: [SIGN] rational [slack]
    slack: SIGN [rational] ["*"] "e"
    goal_exponent: [SIGN] rational [ONE_SIDED]
    rational: INT ["/" INT]

    FAMILY: /X[+-]?/ | "H" | "Ct"
    ONE_SIDED.2: /[+-](?=[ \t]*[,)])/
    SIGN: "+" | "-"
    IDENT: /[A-Za-z_][A-Za-z0-9_]*(-[A-Za-z0-9_]+)*/
    COMMENT: /#[^\n]*/
    _NL: /(\r?\n[\t ]*)+/

    %import common.INT
    %import common.ESCAPED_STRING
    %import common.WS_INLINE
    %ignore WS_INLINE
    %ignore COMMENT
"""

# 可以出现在 from/引用中的源函数及其参数个数
SOURCE_FUNCTIONS = {"sobolev_time_product": 2}

_parser = Lark(
    GRAMMAR,
    start=["document", "exponent", "space", "goal_space"],
    parser="lalr",
    lexer="contextual",
    maybe_placeholders=True,
)


class _SlackTerm(tuple):
    pass


class _LadderTransformer(Transformer):
    """把语法树转换为脚本数据结构；space 的时间带标记由调用方决定"""

    def __init__(self, slab: bool = True):
        super().__init__()
        self.slab = slab

    def rational(self, children):
        numerator, denominator = children[0], children[1] if len(children) > 1 else None
        if denominator is not None and int(denominator) == 0:
            raise MalformedExponentError(f"第 {denominator.line} 行第 {denominator.column} 列: 分母不能为零")
        return Fraction(int(numerator), int(denominator) if denominator is not None else 1)

    def slack(self, children):
        sign = -1 if children[0] == "-" else 1
        magnitude = next((c for c in children[1:] if isinstance(c, Fraction)), Fraction(1))
        return _SlackTerm((sign * magnitude,))

    def exponent(self, children):
        sign, base, slack = 1, Fraction(0), Fraction(0)
        for child in children:
            if child is None:
                continue
            if isinstance(child, _SlackTerm):
                slack = child[0]
            elif isinstance(child, Token):
                sign = -1 if child == "-" else 1
            else:
                base = child
        return Exponent(sign * base, slack)

    def goal_exponent(self, children):
        sign, base, side = 1, Fraction(0), Side.EXACT
        for child in children:
            if child is None:
                continue
            if isinstance(child, Token) and child.type == "ONE_SIDED":
                side = Side(str(child))
            elif isinstance(child, Token):
                sign = -1 if child == "-" else 1
            else:
                base = child
        return GoalExponent(sign * base, side)

    def space(self, children):
        family, s, b = children[0], children[1], children[2] if len(children) > 2 else None
        try:
            return Space(Family(str(family)), s, b, slab=self.slab)
        except SpaceMismatchError as e:
            raise LadderSyntaxError(str(e), family.line, family.column)

    def goal_space(self, children):
        family, s, b = children[0], children[1], children[2] if len(children) > 2 else None
        if (Family(str(family)) is Family.CT) != (b is None):
            raise LadderSyntaxError(f"目标空间 {family} 的指数个数不正确", family.line, family.column)
        return GoalSpace(Family(str(family)), s, b, slab=self.slab)

    def refs(self, children):
        return tuple(child for child in children if child is not None)

    def ref_item(self, children):
        name, args = children[0], children[1] if len(children) > 1 else None
        return RefItem(str(name), args or (), name.line, name.column)

    def from_option(self, children):
        return ("source", children[0])

    def angle_option(self, children):
        return ("angle", tuple(children))

    def theta_option(self, children):
        return ("theta", children[0])

    def grid_option(self, children):
        return ("grid", int(children[0]))

    def slab_option(self, children):
        return ("slab", True)

    def note_option(self, children):
        return ("note", ast.literal_eval(str(children[0])))

    def tactic(self, children):
        name, refs, options = children[0], children[1], children[2:]
        values = {"notes": []}
        for key, value in options:
            if key == "note":
                values["notes"].append(value)
            elif key in values:
                raise LadderSyntaxError(f"选项 {key} 重复出现", name.line, name.column)
            else:
                values[key] = value
        values["notes"] = tuple(values["notes"])
        return TacticCall(str(name), refs or (), line=name.line, column=name.column, **values)

    def declaration(self, children):
        name, kind = children
        try:
            symbol_kind = SymbolKind(str(kind))
        except ValueError:
            allowed = [k.value for k in SymbolKind]
            raise LadderSyntaxError(f"未知的符号类别 {kind}", kind.line, kind.column, allowed)
        return Declaration(str(name), symbol_kind, name.line)

    def hypothesis(self, children):
        ident, symbol, space, axiom = children
        return Hypothesis(str(ident), str(symbol), space, str(axiom), ident.line)

    def step(self, children):
        ident, symbol, space, tactic = children
        return Step(str(ident), str(symbol), space, tactic, ident.line)

    def goal(self, children):
        ident, symbol, space = children
        return Goal(str(ident), str(symbol), space, ident.line)

    def document(self, children):
        return list(children)


def _run(text: str, start: str, slab: bool):
    try:
        tree = _parser.parse(text, start=start)
    except UnexpectedCharacters as e:
        raise LadderSyntaxError(f"无法识别的字符 {text[e.pos_in_stream]!r}", e.line, e.column,
                                getattr(e, "allowed", None))
    except UnexpectedInput as e:
        token = getattr(e, "token", None)
        found = "输入结束" if token is None or token.type == "$END" else repr(str(token))
        line = getattr(e, "line", None)
        raise LadderSyntaxError(f"意外的 {found}", line if line and line > 0 else None,
                                getattr(e, "column", None), getattr(e, "expected", None))
    try:
        return _LadderTransformer(slab).transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, XsbLadderError):
            raise e.orig_exc
        raise


def parse_exponent(text: str) -> Exponent:
    """
    解析单个指数字面量

    Raises:
        LadderSyntaxError: 语法错误
        MalformedExponentError: 分母为零
    """
    return _run(text, "exponent", slab=False)


def parse_space(text: str, slab: bool = False) -> Space:
    """解析空间字面量，例如 "X(-1/2, 1)"、"Ct(1/2)" """
    return _run(text, "space", slab=slab)


def parse_goal_space(text: str, slab: bool = False) -> GoalSpace:
    """解析目标空间字面量，例如 "X(-5/32-, 1/2+)" """
    return _run(text, "goal_space", slab=slab)


def _check_ref(ref: RefItem, defined: Set[str], symbols: Set[str]) -> None:
    if ref.args:
        arity = SOURCE_FUNCTIONS.get(ref.name)
        if arity is None:
            raise UnknownReferenceError(f"未知的源函数 {ref.name}", ref.line, ref.column,
                                        list(SOURCE_FUNCTIONS))
        if len(ref.args) != arity:
            raise UnknownReferenceError(f"{ref.name} 需要 {arity} 个参数", ref.line, ref.column)
        for arg in ref.args:
            _check_ref(arg, defined, symbols)
        return
    if ref.name not in defined and ref.name not in symbols:
        raise UnknownReferenceError(f"引用 {ref.name} 既不是此前定义的编号，也不是已声明的符号",
                                    ref.line, ref.column)


def _build(statements: List, source: str) -> Ladder:
    from .tactic_factory import TacticFactory

    declarations, hypotheses, steps, goals = [], [], [], []
    symbols: Set[str] = set()
    defined: Set[str] = set()
    identifiers: Set[str] = set()

    def claim_identifier(ident: str, line: int) -> None:
        if ident in identifiers:
            raise DuplicateIdentifierError(f"标识符 {ident} 重复定义", line)
        identifiers.add(ident)

    def require_symbol(symbol: str, line: int) -> None:
        if symbol not in symbols:
            raise UnknownReferenceError(f"符号 {symbol} 未声明", line)

    for statement in statements:
        if isinstance(statement, Declaration):
            if statement.name in symbols:
                raise DuplicateIdentifierError(f"符号 {statement.name} 重复声明", statement.line)
            symbols.add(statement.name)
            declarations.append(statement)
        elif isinstance(statement, Hypothesis):
            claim_identifier(statement.id, statement.line)
            require_symbol(statement.symbol, statement.line)
            hypotheses.append(statement)
            defined.add(statement.id)
        elif isinstance(statement, Step):
            claim_identifier(statement.id, statement.line)
            require_symbol(statement.symbol, statement.line)
            tactic = TacticFactory.create_tactic(statement.tactic.name, statement.tactic.line,
                                                 statement.tactic.column)
            tactic.validate(statement.tactic)
            if tactic.CHECK_REFS:
                for ref in statement.tactic.all_refs():
                    _check_ref(ref, defined, symbols)
            steps.append(statement)
            defined.add(statement.id)
        elif isinstance(statement, Goal):
            claim_identifier(statement.id, statement.line)
            require_symbol(statement.symbol, statement.line)
            goals.append(statement)

    return Ladder(tuple(declarations), tuple(hypotheses), tuple(steps), tuple(goals), source)


def parse_ladder(text: str) -> Ladder:
    """
    解析证明脚本

    Args:
        text: 脚本源文本

    Returns:
        解析得到的 Ladder

    Raises:
        LadderSyntaxError: 语法错误（含行列号与期望的记号）、重复标识符、未知策略或未知引用
        MalformedExponentError: 指数字面量非法
    """
    source = text.replace("\r\n", "\n")
    statements = _run(source + "\n", "document", slab=True)
    ladder = _build(statements, source)
    logger.debug("解析完成: %d 个声明, %d 个假设, %d 个步骤, %d 个目标",
                 len(ladder.declarations), len(ladder.hypotheses), len(ladder.steps), len(ladder.goals))
    return ladder
