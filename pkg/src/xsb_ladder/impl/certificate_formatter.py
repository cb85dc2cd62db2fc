"""
证书渲染

证书先转换为统一的节点树，再渲染为纯文本或 XML；JSON 直接由 pydantic 模型导出。
"""

import re
import xml.dom.minidom as minidom
import xml.etree.ElementTree as ET
from typing import Any, Dict, List

from pydantic import BaseModel

from .certificate import (
    AngleSearchRecord, Certificate, EstimateRecord, InterpolationRecord, NullFormRecord, NumericReport,
    StepRecord,
)

FORMATS = ("text", "json", "xml")


def create_report_node(node_type: str, text: str = None, attributes: Dict[str, str] = None,
                       children: list = None) -> Dict[str, Any]:
    """
    创建一个报告节点字典

    Args:
        node_type: 节点类型
        text: 节点文本内容
        attributes: 节点属性，值统一转换为字符串
        children: 子节点列表

    Returns:
        表示节点的字典
    """
    node = {"type": node_type}
    if text:
        node["text"] = text
    if attributes:
        node["attributes"] = {k: str(v) for k, v in attributes.items() if v is not None}
    node["children"] = children or []
    return node


def _verdict(holds: bool) -> str:
    return "pass" if holds else "fail"


def estimate_tree(record: EstimateRecord) -> Dict[str, Any]:
    failing = []
    if not record.holds:
        # 只列出恒等排列下失败的原子
        identity = record.reports[0] if record.reports else None
        if identity is not None:
            failing = [create_report_node("atom", f"{a.lhs} {a.relation} {a.rhs}", {"label": a.label})
                       for a in identity.atoms if not a.holds]
    return create_report_node(
        "estimate",
        "(" + ", ".join(record.sextuple) + ")",
        {"origin": record.origin, "verdict": _verdict(record.holds), "permutation": record.permutation,
         "note": record.note},
        failing,
    )


def nullform_tree(record: NullFormRecord) -> Dict[str, Any]:
    return create_report_node(
        "nullform",
        f"target=({', '.join(record.target)}) factor1=({', '.join(record.factor1)}) "
        f"factor2=({', '.join(record.factor2)})",
        {"source": record.source, "angle": "(" + ", ".join(record.angle) + ")",
         "verdict": _verdict(record.holds), "duality": str(record.uses_duality).lower()},
        [estimate_tree(e) for e in record.estimates],
    )


def _step_tree(step: StepRecord) -> Dict[str, Any]:
    children = [nullform_tree(nf) for nf in step.nullforms]
    children += [create_report_node("note", note) for note in step.notes]
    if step.error:
        children.append(create_report_node("error", step.error))
    attributes = {"id": step.id, "verdict": _verdict(step.holds), "tactic": step.tactic,
                  "theta": step.theta}
    if step.search is not None:
        attributes["scanned"] = step.search.scanned
    return create_report_node("step", f"{step.symbol} ∈ {step.claim}", attributes, children)


def certificate_tree(certificate: Certificate) -> Dict[str, Any]:
    children = [create_report_node("hypothesis", f"{h.symbol} ∈ {h.space}", {"id": h.id, "axiom": h.axiom})
                for h in certificate.hypotheses]
    children += [_step_tree(step) for step in certificate.steps]
    children += [create_report_node("goal", f"{g.symbol} ∈ {g.goal}",
                                    {"id": g.id, "reached": str(g.reached).lower(), "witness": g.witness,
                                     "representative": g.representative})
                 for g in certificate.goals]
    children.append(create_report_node("axioms", ", ".join(certificate.axioms)))
    return create_report_node(
        "certificate",
        attributes={"verdict": _verdict(certificate.verdict), "failed_step": certificate.failed_step,
                    "steps": len(certificate.steps), "ladder_hash": certificate.ladder_hash},
        children=children,
    )


def search_tree(record: AngleSearchRecord) -> Dict[str, Any]:
    found = "(" + ", ".join(record.params) + ")" if record.params else "none"
    return create_report_node(
        "search", f"nullform=({', '.join(record.nullform)}) params={found}",
        {"source": record.source, "grid": record.grid, "scanned": record.scanned,
         "candidates": record.candidates, "verdict": _verdict(record.params is not None)},
    )


def interpolation_tree(record: InterpolationRecord) -> Dict[str, Any]:
    return create_report_node(
        "interpolation", record.result,
        {"a": record.endpoint_a, "b": record.endpoint_b, "theta": record.theta, "target": record.target,
         "verdict": _verdict(record.reached)},
    )


def numeric_tree(report: NumericReport) -> Dict[str, Any]:
    children = [create_report_node("detail", f"{value:.6e}", {"name": name})
                for name, value in report.details.items()]
    return create_report_node(
        report.check, f"{report.value:.6e} (bound {report.bound:.6e})",
        {"samples": report.samples, "seed": report.seed, "verdict": _verdict(report.passed)},
        children,
    )


_TREE_BUILDERS = (
    (Certificate, certificate_tree),
    (EstimateRecord, estimate_tree),
    (NullFormRecord, nullform_tree),
    (AngleSearchRecord, search_tree),
    (InterpolationRecord, interpolation_tree),
    (NumericReport, numeric_tree),
)


def record_tree(model: BaseModel) -> Dict[str, Any]:
    for model_class, builder in _TREE_BUILDERS:
        if isinstance(model, model_class):
            return builder(model)
    raise ValueError(f"无法渲染的报告类型: {type(model).__name__}")


def format_text(tree: Dict[str, Any], indent: int = 0) -> str:
    """把节点树渲染为缩进的纯文本"""
    attributes = " ".join(f"{k}={v}" for k, v in tree.get("attributes", {}).items())
    line = "  " * indent + tree["type"]
    if attributes:
        line += f" [{attributes}]"
    if "text" in tree:
        line += f": {tree['text']}"
    lines: List[str] = [line]
    lines += [format_text(child, indent + 1) for child in tree.get("children", [])]
    return "\n".join(lines)


def _sanitize_xml_name(name: str) -> str:
    sanitized = re.sub(r'[^\w\-\.]', '_', name)
    if not sanitized or sanitized[0].isdigit() or sanitized[0] in '-._':
        sanitized = 'n_' + sanitized
    return sanitized


def _build_xml_tree(parent: ET.Element, children: list) -> None:
    for child_dict in children:
        child = ET.SubElement(parent, _sanitize_xml_name(child_dict["type"]))
        for attr, value in child_dict.get("attributes", {}).items():
            child.set(_sanitize_xml_name(attr), value)
        if "text" in child_dict:
            child.text = child_dict["text"]
        _build_xml_tree(child, child_dict.get("children", []))


def format_xml(tree: Dict[str, Any]) -> str:
    """
    把节点树渲染为 XML 字符串

    Args:
        tree: create_report_node 生成的根节点

    Returns:
        格式化后的 XML 字符串
    """
    root = ET.Element(_sanitize_xml_name(tree["type"]))
    for attr, value in tree.get("attributes", {}).items():
        root.set(_sanitize_xml_name(attr), value)
    if "text" in tree:
        root.text = tree["text"]
    _build_xml_tree(root, tree.get("children", []))

    xml_str = ET.tostring(root, encoding='utf-8').decode('utf-8')
    pretty_xml = minidom.parseString(xml_str).toprettyxml(indent="  ")
    # 移除额外的空行
    return '\n'.join(line for line in pretty_xml.split('\n') if line.strip())


def format_json(model: BaseModel) -> str:
    return model.model_dump_json(indent=2)


def render(model: BaseModel, fmt: str = "text") -> str:
    """
    按格式渲染报告，文本与 XML 经由 record_tree 生成的节点树

    Raises:
        ValueError: 未知的格式
    """
    if fmt == "json":
        return format_json(model)
    if fmt == "xml":
        return format_xml(record_tree(model))
    if fmt == "text":
        return format_text(record_tree(model))
    raise ValueError(f"不支持的输出格式: {fmt}，可选 {', '.join(FORMATS)}")
