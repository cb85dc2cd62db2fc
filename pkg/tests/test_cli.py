#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
测试命令行接口

检查各子命令的退出码、报告输出与 --json 文件，负数指数字面量作为位置参数的处理。

使用方法:
    pytest tests/test_cli.py
"""

import json
import sys
from pathlib import Path

import pytest

# 确保可以导入xsb_ladder模块
sys.path.append(str(Path(__file__).parent.parent / "src/"))
from xsb_ladder.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, RunConfig, main, run

PASSING = ["3/4+e", "0", "3/8-2*e", "1/4+2*e", "-1/8-e", "1/4+2*e"]
KG_NULLFORM = ["3/4+e", "1/2-e", "-1/8-e", "1/4+2*e", "-1/8-e", "1/4+2*e"]
KG_ANGLE = ["1/2-e", "1/4+2*e", "1/4+2*e"]

# 测试项目：命令行参数与期望的退出码
EXIT_CASES = [
    {"name": "随包脚本", "argv": ["verify", "paper.ladder"], "code": EXIT_OK},
    {"name": "乘积估计成立", "argv": ["check-product", *PASSING], "code": EXIT_OK},
    {"name": "乘积估计不成立", "argv": ["check-product", "0", "0", "0", "0", "0", "0"], "code": EXIT_FAILED},
    {"name": "指数语法错误", "argv": ["check-product", "1//2", "0", "0", "0", "0", "0"], "code": EXIT_USAGE},
    {"name": "角度拆分", "argv": ["reduce", *KG_NULLFORM, "--angle", *KG_ANGLE], "code": EXIT_OK},
    {"name": "角度拆分不成立", "argv": ["reduce", *KG_NULLFORM, "--angle", "0", "0", "0"], "code": EXIT_FAILED},
    {"name": "角度参数超过调制指数", "argv": ["reduce", *KG_NULLFORM, "--angle", "0", "1/2", "0"],
     "code": EXIT_FAILED},
    {"name": "角度搜索", "argv": ["search", *KG_NULLFORM], "code": EXIT_OK},
    {"name": "零形式核采样", "argv": ["sample-nullform", "--n", "2000"], "code": EXIT_OK},
    {"name": "角度估计采样", "argv": ["sample-angle", "--n", "2000", "--b", "1/4"], "code": EXIT_OK},
    {"name": "权重可比性", "argv": ["comparability", "--n", "2000", "--m", "2"], "code": EXIT_OK},
    {"name": "负质量", "argv": ["comparability", "--m", "-1"], "code": EXIT_USAGE},
]


@pytest.mark.parametrize("case", EXIT_CASES, ids=[case["name"] for case in EXIT_CASES])
def test_exit_codes(case, monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    assert main(case["argv"]) == case["code"]


def test_missing_ladder(tmp_path, capsys):
    assert main(["verify", str(tmp_path / "missing.ladder")]) == EXIT_USAGE
    assert "输入错误" in capsys.readouterr().err


def test_failing_ladder_reports_on_stdout(tmp_path, capsys):
    path = tmp_path / "bad.ladder"
    path.write_text(
        "symbol psi kind spinor\n"
        "hyp H1: psi in Ct(0) axiom class-space\n"
        "step S1: psi in X(1, 0) by embed(H1) slab\n",
        encoding="utf-8",
    )
    assert main(["verify", str(path)]) == EXIT_FAILED
    out = capsys.readouterr().out
    assert "failed_step=S1" in out


def test_syntax_error_in_ladder(tmp_path, capsys):
    path = tmp_path / "syntax.ladder"
    path.write_text("symbol psi kind spinor\nhyp H1 psi in Ct(0)\n", encoding="utf-8")
    assert main(["verify", str(path)]) == EXIT_USAGE
    assert "第 2 行" in capsys.readouterr().err


def test_json_output(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    target = tmp_path / "certificate.json"
    assert main(["verify", "paper.ladder", "--json", str(target), "--format", "json"]) == EXIT_OK
    data = json.loads(target.read_text(encoding="utf-8"))
    assert data["verdict"] is True
    assert [goal["witness"] for goal in data["goals"]] == ["S17", "S18"]


def test_check_product_json_stdout(capsys):
    assert main(["check-product", *PASSING, "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["holds"] is True
    assert data["permutation"] == "identity"
    assert data["sextuple"][4] == "-1/8-e"


def test_interpolate_solves_theta(capsys):
    argv = ["interpolate", "X(-1/2,1)", "X(0,0)", "--target", "X(-1/8-1*e,1/4+2*e)", "--format", "json"]
    assert main(argv) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["theta"] == "1/4+2*e"
    assert data["result"] == "X(-1/8-e, 1/4+2*e)"


def test_interpolate_needs_theta_or_target():
    result = run(RunConfig(command="interpolate", spaces=["X(-1/2, 1)", "X(0, 0)"]))
    assert result.exit_code == EXIT_USAGE


def test_interpolate_shape_mismatch():
    result = run(RunConfig(command="interpolate", spaces=["X(0, 1)", "Ct(0)"], theta="1/2"))
    assert result.exit_code == EXIT_USAGE


def test_run_returns_payload():
    result = run(RunConfig(command="check-product", exponents=PASSING))
    assert result.exit_code == EXIT_OK
    assert result.payload.holds
    assert result.report.startswith("estimate [origin=input verdict=pass permutation=identity]")


def test_run_reproducible_samples():
    config = RunConfig(command="sample-angle", n=1000, seed=7, output_format="json")
    assert run(config).report == run(config).report


def test_invalid_grid():
    assert main(["search", *KG_NULLFORM, "--grid", "0"]) == EXIT_USAGE
