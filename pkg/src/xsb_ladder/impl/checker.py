"""
对外的高层接口，命令行与 MCP 服务共用

- verify_file / verify_text: 解析并验证证明脚本
- check_product: 判定单个乘积估计
- reduce_nullform / search_angle: 零形式估计的角度拆分与参数搜索
- interpolate_spaces: 空间插值与插值参数求解
"""

import logging
import os
from importlib.resources import as_file, files
from typing import Optional, Sequence

from .angle_search import scan_angle_params
from .cache_manager import load_ladder
from .certificate import (
    AngleSearchRecord, Certificate, EstimateRecord, InterpolationRecord, NullFormRecord,
    estimate_record, nullform_record,
)
from .exceptions import CacheError, ReductionError
from .exponent_core import Exponent, GoalSpace, interpolate, solve_interpolation, space_embeds
from .ladder_parser import parse_ladder, parse_space
from .ladder_verifier import verify_ladder
from .product_rules import TrilinearExponents, check_product_estimate
from .reduction_engine import (
    AngleParams, DiracSourceEstimate, NullFormEstimate, Nonlinearity, dualize, verify_nullform_estimate,
)

logger = logging.getLogger(__name__)

BUNDLED_LADDER = "paper.ladder"
DEFAULT_GRID = 8


def bundled_ladder_text() -> str:
    """随包发布的证明脚本内容"""
    return files("xsb_ladder").joinpath("data", BUNDLED_LADDER).read_text(encoding="utf-8")


def verify_text(text: str, budget: int = GoalSpace.DEFAULT_SLACK_BUDGET) -> Certificate:
    return verify_ladder(parse_ladder(text), budget)


def verify_file(path: str, budget: int = GoalSpace.DEFAULT_SLACK_BUDGET) -> Certificate:
    """
    验证脚本文件；文件不存在且名为 paper.ladder 时使用随包发布的脚本

    Raises:
        CacheError: 文件不存在或无法读取
        LadderSyntaxError: 脚本语法错误
    """
    if not os.path.exists(path):
        if os.path.basename(path) != BUNDLED_LADDER:
            raise CacheError(f"文件不存在: {path}")
        logger.info("使用随包发布的 %s", BUNDLED_LADDER)
        with as_file(files("xsb_ladder").joinpath("data", BUNDLED_LADDER)) as bundled:
            return verify_ladder(load_ladder(str(bundled)), budget)
    return verify_ladder(load_ladder(path), budget)


def parse_sextuple(values: Sequence[str]) -> TrilinearExponents:
    """
    解析六个指数字面量 (s0, b0, s1, b1, s2, b2)

    Raises:
        ValueError: 个数不是 6
        LadderSyntaxError: 字面量语法错误
    """
    if len(values) != 6:
        raise ValueError(f"需要 6 个指数，实际为 {len(values)}")
    return TrilinearExponents.from_sextuple(*(Exponent.parse(v) for v in values))


def check_product(values: Sequence[str]) -> EstimateRecord:
    return estimate_record("input", check_product_estimate(parse_sextuple(values)))


def build_nullform(values: Sequence[str], dirac: bool = False) -> NullFormEstimate:
    """
    由六个指数构造零形式估计

    dirac 为真时六个指数依次是 Dirac 源项估计的 (s, b)、φ 因子与 ψ 因子，先做对偶改写。
    """
    (target, first, second) = parse_sextuple(values).pairs
    if dirac:
        return dualize(DiracSourceEstimate(target, first, second))
    return NullFormEstimate(target, first, second, Nonlinearity.KLEIN_GORDON)


def reduce_nullform(values: Sequence[str], angle: Optional[Sequence[str]] = None, dirac: bool = False,
                    grid: int = DEFAULT_GRID) -> NullFormRecord:
    """
    角度拆分并判定；未给出角度参数时先搜索

    Raises:
        ReductionError: 参数超过因子的调制指数，或搜索没有结果
    """
    n = build_nullform(values, dirac)
    if angle is None:
        params = scan_angle_params(n, grid).params
        if params is None:
            raise ReductionError(f"网格 1/{grid} 上没有可用的角度参数")
    else:
        if len(angle) != 3:
            raise ValueError(f"角度参数需要 3 个指数，实际为 {len(angle)}")
        params = AngleParams(*(Exponent.parse(v) for v in angle))
    return nullform_record(verify_nullform_estimate(n, params))


def search_angle(values: Sequence[str], grid: int = DEFAULT_GRID, dirac: bool = False) -> AngleSearchRecord:
    n = build_nullform(values, dirac)
    result = scan_angle_params(n, grid)
    pairs = (n.target, n.factor1, n.factor2)
    return AngleSearchRecord(
        nullform=[str(x) for pair in pairs for x in pair],
        source=n.source.value,
        grid=grid,
        scanned=result.scanned,
        candidates=result.candidates,
        params=None if result.params is None else [str(x) for x in result.params.as_tuple()],
    )


def interpolate_spaces(a: str, b: str, theta: Optional[str] = None,
                       target: Optional[str] = None) -> InterpolationRecord:
    """
    给定 θ 时计算 [b, a]_θ；给定目标空间时求解 θ

    Raises:
        ValueError: θ 与目标空间都未给出
        SpaceMismatchError: 两端空间形状不一致
    """
    space_a, space_b = parse_space(a), parse_space(b)
    if theta is not None:
        value = Exponent.parse(theta)
        result = interpolate(space_a, space_b, value)
        reached = True
        target_space = None
        if target is not None:
            target_space = parse_space(target)
            reached = space_embeds(result, target_space)
        return InterpolationRecord(endpoint_a=str(space_a), endpoint_b=str(space_b), theta=str(value),
                                   result=str(result), target=None if target is None else str(target_space),
                                   reached=reached)
    if target is None:
        raise ValueError("必须给出 theta 或 target")
    target_space = parse_space(target)
    value = solve_interpolation(space_a, space_b, target_space)
    return InterpolationRecord(
        endpoint_a=str(space_a), endpoint_b=str(space_b), target=str(target_space),
        theta=None if value is None else str(value),
        result=None if value is None else str(interpolate(space_a, space_b, value)),
        reached=value is not None,
    )
