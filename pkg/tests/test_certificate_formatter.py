#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
测试证书渲染与脚本缓存

文本、JSON、XML 三种格式的渲染结果，以及脚本文件按修改时间与大小缓存、内容变化时重新解析。

使用方法:
    pytest tests/test_certificate_formatter.py
"""

import json
import os
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

# 确保可以导入xsb_ladder模块
sys.path.append(str(Path(__file__).parent.parent / "src/"))
from xsb_ladder.impl.cache_manager import (
    CacheManager, cache_manager, decode_source, file_signature, load_ladder,
)
from xsb_ladder.impl.certificate import Certificate, NumericReport
from xsb_ladder.impl.certificate_formatter import (
    FORMATS, create_report_node, format_text, record_tree, render,
)
from xsb_ladder.impl.checker import bundled_ladder_text, check_product, interpolate_spaces, verify_text
from xsb_ladder.impl.exceptions import CacheError
from xsb_ladder.impl.ladder_model import SymbolKind

FAILING = ["0", "0", "0", "0", "0", "0"]
PASSING = ["3/4+e", "0", "3/8-2*e", "1/4+2*e", "-1/8-e", "1/4+2*e"]


@pytest.fixture(scope="module")
def certificate() -> Certificate:
    return verify_text(bundled_ladder_text())


def test_create_report_node():
    node = create_report_node("step", "psi ∈ X(0, 0)", {"id": "S1", "theta": None})
    assert node == {"type": "step", "text": "psi ∈ X(0, 0)", "attributes": {"id": "S1"}, "children": []}
    assert create_report_node("axioms") == {"type": "axioms", "children": []}


def test_json_round_trip(certificate):
    text = render(certificate, "json")
    data = json.loads(text)
    assert data["verdict"] is True
    assert len(data["steps"]) == 18
    assert Certificate.model_validate_json(text) == certificate


def test_text_rendering(certificate):
    text = render(certificate)
    lines = text.splitlines()
    assert lines[0].startswith("certificate [verdict=pass")
    assert any(line.strip().startswith("step [id=S15") for line in lines)
    assert "representative=X(-5/32-100*e, 1/2+e)" in text


def test_xml_rendering(certificate):
    root = ET.fromstring(render(certificate, "xml"))
    assert root.tag == "certificate"
    assert root.get("verdict") == "pass"
    steps = root.findall("step")
    assert len(steps) == 18
    s9 = next(step for step in steps if step.get("id") == "S9")
    assert len(s9.find("nullform").findall("estimate")) == 3


def test_failing_estimate_lists_atoms():
    tree = record_tree(check_product(FAILING))
    assert tree["attributes"]["verdict"] == "fail"
    labels = {child["attributes"]["label"] for child in tree["children"]}
    assert {"P1b", "P1c", "P8"} <= labels
    passing = record_tree(check_product(PASSING))
    assert passing["attributes"]["permutation"] == "identity"
    assert passing["children"] == []


def test_other_records_render():
    record = interpolate_spaces("X(-1/2, 1)", "X(0, 0)", theta="1/4+2*e")
    assert "X(-1/8-e, 1/4+2*e)" in render(record)
    report = NumericReport(check="comparability", samples=10, seed=0, value=1.5, bound=2.0, passed=True,
                           details={"mass": 1.0})
    text = format_text(record_tree(report))
    assert text.startswith("comparability [samples=10 seed=0 verdict=pass]")
    assert "mass" in render(report, "xml")


def test_unknown_format_and_model(certificate):
    assert FORMATS == ("text", "json", "xml")
    with pytest.raises(ValueError):
        render(certificate, "yaml")
    with pytest.raises(ValueError):
        record_tree(certificate.hypotheses[0])


def test_decode_source():
    assert decode_source("符号".encode("utf-8")) == "符号"
    assert decode_source("符号".encode("gbk")) == "符号"


def test_load_ladder_uses_cache(tmp_path):
    path = tmp_path / "small.ladder"
    path.write_text("symbol psi kind spinor\nhyp H1: psi in Ct(0) axiom class-space\n", encoding="utf-8")
    first = load_ladder(str(path))
    assert cache_manager.is_cache_valid(str(path.resolve()))
    assert load_ladder(str(path)) is first
    cache_manager.clear(str(path.resolve()))
    assert not cache_manager.is_cache_valid(str(path.resolve()))


def test_load_ladder_same_size_rewrite(tmp_path):
    path = tmp_path / "rewrite.ladder"
    path.write_text("symbol psi kind spinor\nhyp H1: psi in Ct(0) axiom class-space\n", encoding="utf-8")
    first = load_ladder(str(path))
    stat = path.stat()
    # 同样长度的新内容，修改时间复原
    path.write_text("symbol phi kind scalar\nhyp H2: phi in Ct(0) axiom class-space\n", encoding="utf-8")
    os.utime(path, ns=(stat.st_atime_ns, stat.st_mtime_ns))
    assert path.stat().st_size == stat.st_size
    second = load_ladder(str(path))
    assert second is not first
    assert [h.id for h in second.hypotheses] == ["H2"]
    assert second.kinds() == {"phi": SymbolKind.SCALAR}


def test_cache_signature_tracks_size(tmp_path):
    path = tmp_path / "grow.ladder"
    path.write_text("symbol psi kind spinor\n", encoding="utf-8")
    manager = CacheManager()
    manager.set_ladder(str(path), None)
    stat = path.stat()
    path.write_text("symbol psi kind spinor\nsymbol phi kind scalar\n", encoding="utf-8")
    os.utime(path, ns=(stat.st_atime_ns, stat.st_mtime_ns))
    assert file_signature(str(path))[0] == stat.st_mtime_ns
    assert not manager.is_cache_valid(str(path))


def test_load_ladder_missing_file(tmp_path):
    with pytest.raises(CacheError):
        load_ladder(str(tmp_path / "missing.ladder"))


def test_cache_manager_rejects_missing_path(tmp_path):
    manager = CacheManager()
    with pytest.raises(CacheError):
        manager.set_ladder(str(tmp_path / "missing.ladder"), None)
    assert manager.get_ladder(str(tmp_path / "missing.ladder")) is None
