import argparse
import logging
import re
import sys
from typing import List, Literal, NamedTuple, Optional

from pydantic import BaseModel, Field

from xsb_ladder.impl import checker
from xsb_ladder.impl.certificate_formatter import FORMATS, render
from xsb_ladder.impl.certificate import NumericReport
from xsb_ladder.impl.exceptions import (
    CacheError, ExponentError, InvariantBreachError, LadderSyntaxError, ReductionError,
    SpaceMismatchError, XsbLadderError,
)
from xsb_ladder.impl.exponent_core import Exponent, GoalSpace
from xsb_ladder.impl.ladder_verifier import recheck_certificate
from xsb_ladder.impl import numeric_checks
from xsb_ladder.impl.reduction_engine import AngleParams

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class RunConfig(BaseModel):
    """一次命令行调用的全部选项"""

    command: Literal["verify", "check-product", "reduce", "search", "sample-nullform", "sample-angle",
                     "comparability", "interpolate"]
    path: Optional[str] = None
    exponents: List[str] = Field(default_factory=list)
    angle: Optional[List[str]] = None
    dirac: bool = False
    grid: int = Field(default=checker.DEFAULT_GRID, ge=1)
    seed: int = Field(default=0, ge=0)
    n: int = Field(default=10_000, ge=1)
    a: str = "1/2"
    b: str = "1/2"
    c: str = "1/2"
    constant: float = Field(default=numeric_checks.ANGLE_LEMMA_CONSTANT, gt=0)
    mass: float = Field(default=1.0, ge=0)
    spaces: List[str] = Field(default_factory=list)
    theta: Optional[str] = None
    target: Optional[str] = None
    budget: int = Field(default=GoalSpace.DEFAULT_SLACK_BUDGET, ge=1)
    output_format: Literal["text", "json", "xml"] = "text"
    json_path: Optional[str] = None


class RunResult(NamedTuple):
    exit_code: int
    report: str
    payload: Optional[BaseModel] = None


def _verify(config: RunConfig) -> BaseModel:
    certificate = checker.verify_file(config.path, config.budget)
    expected = certificate.failed_step is None and all(g.reached for g in certificate.goals)
    if certificate.verdict != expected:
        raise InvariantBreachError("证书总判定与步骤、目标的结果不一致")
    if recheck_certificate(certificate) != certificate:
        raise InvariantBreachError("证书复查结果与原证书不一致")
    return certificate


def _sample_nullform(config: RunConfig) -> NumericReport:
    report = numeric_checks.sample_nullform_kernel(config.n, config.seed)
    return NumericReport(
        check="sample-nullform", samples=report.samples, seed=config.seed, value=report.max_ratio, bound=0.5,
        passed=report.max_deviation <= 1e-9 and report.max_ratio <= 0.5 + 1e-9,
        details={"max_deviation": report.max_deviation},
    )


def _sample_angle(config: RunConfig) -> NumericReport:
    params = AngleParams(*(Exponent.parse(v) for v in (config.a, config.b, config.c)))
    worst = numeric_checks.sample_angle_lemma(config.n, params, config.constant, config.seed)
    return NumericReport(check="sample-angle", samples=config.n, seed=config.seed, value=worst, bound=1.0,
                         passed=worst <= 1.0, details={"constant": config.constant})


def _comparability(config: RunConfig) -> NumericReport:
    worst = numeric_checks.weight_comparability(config.mass, config.n, config.seed)
    bound = 1.0 + config.mass
    return NumericReport(check="comparability", samples=config.n, seed=config.seed, value=worst, bound=bound,
                         passed=worst <= bound * (1 + 1e-12), details={"mass": config.mass})


def _dispatch(config: RunConfig) -> BaseModel:
    command = config.command
    if command == "verify":
        return _verify(config)
    if command == "check-product":
        return checker.check_product(config.exponents)
    if command == "reduce":
        return checker.reduce_nullform(config.exponents, config.angle, config.dirac, config.grid)
    if command == "search":
        return checker.search_angle(config.exponents, config.grid, config.dirac)
    if command == "sample-nullform":
        return _sample_nullform(config)
    if command == "sample-angle":
        return _sample_angle(config)
    if command == "comparability":
        return _comparability(config)
    if len(config.spaces) != 2:
        raise ValueError("interpolate 需要两个端点空间")
    return checker.interpolate_spaces(config.spaces[0], config.spaces[1], config.theta, config.target)


def _passed(payload: BaseModel) -> bool:
    for name in ("verdict", "holds", "passed", "reached"):
        if hasattr(payload, name):
            return bool(getattr(payload, name))
    return getattr(payload, "params", None) is not None


def run(config: RunConfig) -> RunResult:
    """
    执行一条命令

    Args:
        config: 运行配置

    Returns:
        退出码、按所选格式渲染的报告以及报告模型；
        退出码 0 表示通过，1 表示验证失败，2 表示用法或解析错误，3 表示内部不变量被破坏
    """
    try:
        payload = _dispatch(config)
    except InvariantBreachError as e:
        logger.error("内部错误: %s", e)
        return RunResult(EXIT_INTERNAL, f"内部错误: {e}")
    except (LadderSyntaxError, ExponentError, SpaceMismatchError, CacheError, ValueError) as e:
        return RunResult(EXIT_USAGE, f"输入错误: {e}")
    except ReductionError as e:
        return RunResult(EXIT_FAILED, f"验证失败: {e}")
    except XsbLadderError as e:
        logger.error("未归类的错误: %s", e)
        return RunResult(EXIT_INTERNAL, f"内部错误: {e}")
    except Exception as e:
        logger.exception("意外错误")
        return RunResult(EXIT_INTERNAL, f"内部错误: {e}")

    if config.json_path:
        with open(config.json_path, "w", encoding="utf-8") as f:
            f.write(payload.model_dump_json(indent=2))
            f.write("\n")
    exit_code = EXIT_OK if _passed(payload) else EXIT_FAILED
    return RunResult(exit_code, render(payload, config.output_format), payload)


def _exponent_args(argv: List[str]) -> List[str]:
    # 以 "-数字" 开头的指数字面量前加空格，避免被 argparse 当作选项
    return [" " + arg if re.match(r"^-\d", arg) else arg for arg in argv]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', dest='json_path', help='把 JSON 报告写入该文件')
    common.add_argument('--format', dest='output_format', choices=FORMATS, default='text',
                        help='标准输出的报告格式')
    common.add_argument('--seed', type=int, default=0, help='随机种子')
    common.add_argument('--n', type=int, default=10_000, help='样本数')
    common.add_argument('-v', '--verbose', action='store_true', help='输出调试日志')

    parser = argparse.ArgumentParser(prog='xsb-ladder', description='X^{s,b} 自举证明脚本的精确验证工具')
    commands = parser.add_subparsers(dest='command', required=True)

    verify = commands.add_parser('verify', parents=[common], help='验证证明脚本')
    verify.add_argument('path', help='脚本文件；paper.ladder 不存在时使用随包发布的脚本')
    verify.add_argument('--budget', type=int, default=GoalSpace.DEFAULT_SLACK_BUDGET,
                        help='单侧指数类允许的 ε 系数上限')

    product = commands.add_parser('check-product', parents=[common], help='判定乘积估计')
    product.add_argument('exponents', nargs=6, metavar='EXP', help='s0 b0 s1 b1 s2 b2')

    reduce = commands.add_parser('reduce', parents=[common], help='零形式估计的角度拆分')
    reduce.add_argument('exponents', nargs=6, metavar='EXP', help='目标与两个因子的指数')
    reduce.add_argument('--angle', nargs=3, metavar='P', help='角度参数 a b c，缺省时搜索')
    reduce.add_argument('--dirac', action='store_true', help='按 Dirac 源项估计解释并做对偶改写')
    reduce.add_argument('--grid', type=int, default=checker.DEFAULT_GRID, help='搜索网格分母')

    search = commands.add_parser('search', parents=[common], help='搜索角度参数')
    search.add_argument('exponents', nargs=6, metavar='EXP', help='目标与两个因子的指数')
    search.add_argument('--grid', type=int, default=checker.DEFAULT_GRID, help='网格分母')
    search.add_argument('--dirac', action='store_true', help='按 Dirac 源项估计解释并做对偶改写')

    commands.add_parser('sample-nullform', parents=[common], help='采样检验零形式核的角度界')

    angle = commands.add_parser('sample-angle', parents=[common], help='采样检验角度估计')
    angle.add_argument('--a', default='1/2')
    angle.add_argument('--b', default='1/2')
    angle.add_argument('--c', default='1/2')
    angle.add_argument('--C', dest='constant', type=float, default=numeric_checks.ANGLE_LEMMA_CONSTANT,
                       help='估计中的常数')

    comparability = commands.add_parser('comparability', parents=[common], help='采样检验调制权重的可比性')
    comparability.add_argument('--m', dest='mass', type=float, default=1.0, help='质量')

    interpolation = commands.add_parser('interpolate', parents=[common], help='空间插值')
    interpolation.add_argument('spaces', nargs=2, metavar='SPACE', help='θ=1 端与 θ=0 端，例如 "X(-1/2,1)"')
    interpolation.add_argument('--theta', help='插值参数')
    interpolation.add_argument('--target', help='目标空间，给出时求解 θ')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """命令行入口点"""
    parser = build_parser()
    args = parser.parse_args(_exponent_args(sys.argv[1:] if argv is None else list(argv)))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')

    values = {k: v for k, v in vars(args).items() if k != 'verbose' and v is not None}
    for key in ('theta', 'target', 'a', 'b', 'c'):
        if isinstance(values.get(key), str):
            values[key] = values[key].strip()
    try:
        config = RunConfig(**values)
    except ValueError as e:
        print(f"参数错误: {e}", file=sys.stderr)
        return EXIT_USAGE

    result = run(config)
    stream = sys.stdout if result.exit_code in (EXIT_OK, EXIT_FAILED) and result.payload is not None else sys.stderr
    print(result.report, file=stream)
    return result.exit_code


if __name__ == '__main__':
    sys.exit(main())
