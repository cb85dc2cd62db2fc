"""
证书数据模型

证书是一个 pydantic 模型，字段顺序固定，所有指数都以最简分数字符串记录，
因此相同输入得到逐字节相同的 JSON。
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from .product_rules import ConditionReport, Permutation, ProductVerdict
from .reduction_engine import CertificateNode, CheckedEstimate


class ConditionAtomRecord(BaseModel):
    label: str
    lhs: str
    relation: str
    rhs: str
    holds: bool


class ConditionReportRecord(BaseModel):
    permutation: str
    holds: bool
    atoms: List[ConditionAtomRecord]


class EstimateRecord(BaseModel):
    """一个乘积估计：六元组按 (s0, b0, s1, b1, s2, b2) 排列"""

    origin: str
    sextuple: List[str]
    holds: bool
    permutation: Optional[str] = None
    reports: List[ConditionReportRecord] = Field(default_factory=list)
    note: Optional[str] = None


class NullFormRecord(BaseModel):
    source: str
    target: List[str]
    factor1: List[str]
    factor2: List[str]
    angle: List[str]
    holds: bool
    uses_duality: bool
    estimates: List[EstimateRecord]
    notes: List[str] = Field(default_factory=list)


class SearchRecord(BaseModel):
    grid: int
    scanned: int
    candidates: int


class HypothesisRecord(BaseModel):
    id: str
    symbol: str
    space: str
    axiom: str


class StepRecord(BaseModel):
    id: str
    symbol: str
    claim: str
    tactic: str
    holds: bool
    established: Optional[str] = None
    inputs: List[str] = Field(default_factory=list)
    binding: List[str] = Field(default_factory=list)
    theta: Optional[str] = None
    search: Optional[SearchRecord] = None
    nullforms: List[NullFormRecord] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    axioms: List[str] = Field(default_factory=list)
    error: Optional[str] = None


class GoalRecord(BaseModel):
    id: str
    symbol: str
    goal: str
    reached: bool
    witness: Optional[str] = None
    representative: Optional[str] = None


class Certificate(BaseModel):
    ladder_hash: str
    verdict: bool
    failed_step: Optional[str] = None
    slack_budget: int
    hypotheses: List[HypothesisRecord] = Field(default_factory=list)
    steps: List[StepRecord] = Field(default_factory=list)
    goals: List[GoalRecord] = Field(default_factory=list)
    axioms: List[str] = Field(default_factory=list)
    assumptions: List[str] = Field(default_factory=list)


def report_record(report: ConditionReport, permutation: Permutation) -> ConditionReportRecord:
    atoms = [ConditionAtomRecord(label=a.label, lhs=str(a.lhs), relation=a.relation, rhs=str(a.rhs), holds=a.holds)
             for a in report.atoms]
    return ConditionReportRecord(permutation=permutation.label, holds=report.holds, atoms=atoms)


def estimate_record(origin: str, verdict: ProductVerdict, note: Optional[str] = None) -> EstimateRecord:
    return EstimateRecord(
        origin=origin,
        sextuple=[str(x) for x in verdict.exponents.sextuple()],
        holds=verdict.holds,
        permutation=verdict.permutation.label if verdict.permutation else None,
        reports=[report_record(r, p) for p, r in zip(Permutation, verdict.reports)],
        note=note,
    )


def checked_record(check: CheckedEstimate) -> EstimateRecord:
    return estimate_record(check.emitted.origin, check.verdict, check.emitted.note)


def nullform_record(node: CertificateNode) -> NullFormRecord:
    n = node.estimate
    return NullFormRecord(
        source=n.source.value,
        target=[str(x) for x in n.target],
        factor1=[str(x) for x in n.factor1],
        factor2=[str(x) for x in n.factor2],
        angle=[str(x) for x in node.params.as_tuple()],
        holds=node.holds,
        uses_duality=node.uses_duality,
        estimates=[checked_record(c) for c in node.checks],
        notes=list(node.notes),
    )


class AngleSearchRecord(BaseModel):
    nullform: List[str]
    source: str
    grid: int
    scanned: int
    candidates: int
    params: Optional[List[str]] = None


class InterpolationRecord(BaseModel):
    endpoint_a: str
    endpoint_b: str
    theta: Optional[str] = None
    result: Optional[str] = None
    target: Optional[str] = None
    reached: bool = True


class NumericReport(BaseModel):
    """数值采样报告；passed 为真表示没有发现违反"""

    check: str
    samples: int
    seed: int
    value: float
    bound: float
    passed: bool
    details: Dict[str, float] = Field(default_factory=dict)
