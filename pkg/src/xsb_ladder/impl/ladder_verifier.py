"""
证明脚本验证器

按顺序验证每个步骤，成员关系逐步累积；第一个失败的步骤终止验证。
最后用单侧指数类检查目标，并生成确定性的证书。
"""

import logging
from typing import List, Optional

from .certificate import (
    Certificate, GoalRecord, HypothesisRecord, NullFormRecord, SearchRecord, StepRecord,
    estimate_record, nullform_record,
)
from .exceptions import SpaceMismatchError, XsbLadderError
from .exponent_core import Exponent, GoalSpace, goal_reached
from .ladder_model import Goal, Ladder, Step
from .product_rules import TrilinearExponents, check_product_estimate
from .tactic_factory import TacticFactory
from .tactics_base import LadderState, Membership, TacticResult

logger = logging.getLogger(__name__)


def _step_record(step: Step, result: TacticResult) -> StepRecord:
    return StepRecord(
        id=step.id,
        symbol=step.symbol,
        claim=str(step.space),
        tactic=str(step.tactic),
        holds=result.holds,
        established=None if result.established is None else str(result.established),
        inputs=list(result.inputs),
        binding=list(result.binding),
        theta=None if result.theta is None else str(result.theta),
        search=None if result.scan is None else SearchRecord(
            grid=result.scan.grid, scanned=result.scan.scanned, candidates=result.scan.candidates),
        nullforms=[nullform_record(node) for node in result.nodes],
        notes=list(result.notes) + list(step.tactic.notes),
        axioms=list(result.axioms),
        error=result.error,
    )


def _check_goal(goal: Goal, state: LadderState, budget: int) -> GoalRecord:
    for m in state.memberships_of(goal.symbol):
        try:
            representative = goal_reached(m.space, goal.space, budget)
        except SpaceMismatchError:
            continue
        if representative is not None:
            return GoalRecord(id=goal.id, symbol=goal.symbol, goal=str(goal.space), reached=True,
                              witness=m.id, representative=str(representative))
    return GoalRecord(id=goal.id, symbol=goal.symbol, goal=str(goal.space), reached=False)


def verify_ladder(ladder: Ladder, slack_budget: int = GoalSpace.DEFAULT_SLACK_BUDGET) -> Certificate:
    """
    验证证明脚本

    Args:
        ladder: 解析后的脚本
        slack_budget: 单侧指数类允许的 ε 系数上限

    Returns:
        证书；总判定为真当且仅当所有步骤通过且所有目标达成
    """
    state = LadderState(ladder.kinds())
    hypotheses = []
    for h in ladder.hypotheses:
        state.add(Membership(h.id, h.symbol, h.space))
        hypotheses.append(HypothesisRecord(id=h.id, symbol=h.symbol, space=str(h.space), axiom=h.axiom))

    steps: List[StepRecord] = []
    failed_step: Optional[str] = None
    for step in ladder.steps:
        try:
            tactic = TacticFactory.create_tactic(step.tactic.name, step.tactic.line, step.tactic.column)
            result = tactic.apply(step, state)
        except XsbLadderError as e:
            result = TacticResult(holds=False, error=str(e))
        steps.append(_step_record(step, result))
        if not result.holds:
            failed_step = step.id
            logger.warning("步骤 %s 验证失败: %s", step.id, result.error)
            break
        logger.debug("步骤 %s: %s ∈ %s 通过", step.id, step.symbol, step.space)
        state.add(Membership(step.id, step.symbol, step.space))

    goals = [_check_goal(goal, state, slack_budget) for goal in ladder.goals]
    verdict = failed_step is None and all(g.reached for g in goals)
    certificate = Certificate(
        ladder_hash=ladder.digest,
        verdict=verdict,
        failed_step=failed_step,
        slack_budget=slack_budget,
        hypotheses=hypotheses,
        steps=steps,
        goals=goals,
        axioms=sorted({axiom for record in steps for axiom in record.axioms}),
        assumptions=sorted({h.axiom for h in ladder.hypotheses}),
    )
    logger.info("验证结束: %d 个步骤, 判定 %s", len(steps), "通过" if verdict else "失败")
    return certificate


def _recheck_nullform(record: NullFormRecord) -> NullFormRecord:
    estimates = []
    for estimate in record.estimates:
        exponents = TrilinearExponents.from_sextuple(*(Exponent.parse(x) for x in estimate.sextuple))
        estimates.append(estimate_record(estimate.origin, check_product_estimate(exponents), estimate.note))
    uses_duality = any(e.holds and e.permutation != "identity" for e in estimates)
    return record.model_copy(update={
        "estimates": estimates,
        "holds": all(e.holds for e in estimates),
        "uses_duality": uses_duality,
    })


def recheck_certificate(certificate: Certificate) -> Certificate:
    """
    重新执行证书中记录的每个乘积估计并重建证书

    未被篡改的证书复查后与原证书相同。

    Raises:
        LadderSyntaxError: 证书中的指数字符串无法解析
    """
    steps = []
    for record in certificate.steps:
        if record.nullforms:
            nullforms = [_recheck_nullform(nf) for nf in record.nullforms]
            holds = all(nf.holds for nf in nullforms)
            error = record.error
            if not holds and error is None:
                failed = [e.origin for nf in nullforms for e in nf.estimates if not e.holds]
                error = f"复查时乘积估计不成立: {', '.join(failed)}"
            record = record.model_copy(update={"nullforms": nullforms, "holds": holds, "error": error})
        steps.append(record)
    failed_step = next((record.id for record in steps if not record.holds), None)
    verdict = failed_step is None and all(g.reached for g in certificate.goals)
    if verdict != certificate.verdict:
        logger.warning("复查改变了总判定: %s -> %s", certificate.verdict, verdict)
    return certificate.model_copy(update={"steps": steps, "failed_step": failed_step, "verdict": verdict})
