import logging
from fractions import Fraction
from itertools import product
from typing import List, NamedTuple, Optional

from .exceptions import ReductionError
from .exponent_core import EPS, HALF, ZERO, Exponent
from .reduction_engine import AngleParams, NullFormEstimate, verify_nullform_estimate

logger = logging.getLogger(__name__)


class ScanResult(NamedTuple):
    params: Optional[AngleParams]
    scanned: int
    candidates: int


def candidate_values(n: NullFormEstimate, grid_denominator: int) -> List[Exponent]:
    """
    角度参数的候选集合

    网格点 k/g (0 ≤ k ≤ ⌊g/2⌋)、每个网格点向下偏移 ε 与 2ε 的邻点，
    以及两个因子的调制指数；只保留 [0, 1/2] 内的值并升序排列。
    """
    if grid_denominator < 1:
        raise ValueError(f"网格分母必须 ≥ 1，当前为 {grid_denominator}")
    values = set()
    for k in range(grid_denominator // 2 + 1):
        point = Exponent(Fraction(k, grid_denominator))
        values.update((point, point - EPS, point - EPS.scale(2)))
    values.update((n.factor1.b, n.factor2.b))
    return sorted(v for v in values if ZERO <= v <= HALF)


def scan_angle_params(n: NullFormEstimate, grid_denominator: int) -> ScanResult:
    """按字典序扫描 (a, b, c)，返回第一个使 verify_nullform_estimate 通过的参数"""
    values = candidate_values(n, grid_denominator)
    scanned = 0
    for a, b, c in product(values, repeat=3):
        scanned += 1
        params = AngleParams(a, b, c)
        try:
            node = verify_nullform_estimate(n, params)
        except ReductionError:
            continue
        if node.holds:
            logger.debug("扫描 %d 组后找到角度参数 %s", scanned, params)
            return ScanResult(params, scanned, len(values))
    logger.debug("扫描 %d 组角度参数均未通过", scanned)
    return ScanResult(None, scanned, len(values))


def search_angle_params(n: NullFormEstimate, grid_denominator: int) -> Optional[AngleParams]:
    """搜索可用的角度参数；穷尽时返回 None"""
    return scan_angle_params(n, grid_denominator).params
