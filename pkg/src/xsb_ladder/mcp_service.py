from typing import Annotated, Optional

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import (
    ErrorData, Tool, TextContent, Prompt, PromptArgument,
    GetPromptResult, PromptMessage, INVALID_PARAMS, INTERNAL_ERROR
)
from mcp.shared.exceptions import McpError
from pydantic import BaseModel, Field

from .impl import checker
from .impl.certificate_formatter import render
from .impl.exceptions import (
    CacheError, ExponentError, LadderSyntaxError, ReductionError, SpaceMismatchError,
)


# 定义请求模型
class VerifyLadderModel(BaseModel):
    text: Annotated[Optional[str], Field(default=None, description="证明脚本的全文。与 path 二选一，都不提供时验证随包发布的脚本。")]
    path: Annotated[Optional[str], Field(default=None, description="证明脚本文件路径。")]
    budget: Annotated[int, Field(default=100, ge=1, description="单侧指数类（如 1/2+）允许的 ε 系数上限。")]
    format: Annotated[str, Field(default="text", description="报告格式: text、json 或 xml。")]


class CheckProductModel(BaseModel):
    exponents: Annotated[list[str], Field(description="乘积估计的六个指数 s0 b0 s1 b1 s2 b2，"
                                          "每个是精确分数加 ε 的倍数，例如 \"3/4+1*e\"、\"-1/8-e\"。")]
    format: Annotated[str, Field(default="text", description="报告格式: text、json 或 xml。")]


class ReduceNullformModel(BaseModel):
    exponents: Annotated[list[str], Field(description="零形式估计的目标 (s0, b0) 与两个因子 (s1, b1)、(s2, b2)。"
                                          "dirac 为真时依次是 Dirac 源项的 (s, b)、φ 因子与 ψ 因子。")]
    angle: Annotated[Optional[list[str]], Field(default=None, description="角度参数 a b c；不提供时在网格上搜索。")]
    dirac: Annotated[bool, Field(default=False, description="按 Dirac 源项估计解释并先做对偶改写。")]
    grid: Annotated[int, Field(default=checker.DEFAULT_GRID, ge=1, description="搜索网格的分母。")]
    format: Annotated[str, Field(default="text", description="报告格式: text、json 或 xml。")]


class SearchAngleModel(BaseModel):
    exponents: Annotated[list[str], Field(description="零形式估计的六个指数，含义同 reduce_nullform。")]
    grid: Annotated[int, Field(default=checker.DEFAULT_GRID, ge=1, description="搜索网格的分母。")]
    dirac: Annotated[bool, Field(default=False, description="按 Dirac 源项估计解释。")]
    format: Annotated[str, Field(default="text", description="报告格式: text、json 或 xml。")]


TOOLS = {
    "verify_ladder": (
        VerifyLadderModel,
        "验证 X^{s,b} 自举证明脚本，逐步检查每个空间归属并给出证书。"
        "证书列出每一步使用的策略、拆分出的乘积估计及其判定、目标是否达成以及用到的公理。",
    ),
    "check_product": (
        CheckProductModel,
        "判定一个三线性乘积估计是否满足乘积定理的全部条件，依次尝试三种下标排列。",
    ),
    "reduce_nullform": (
        ReduceNullformModel,
        "用角度估计把零形式估计拆分成若干乘积估计并逐个判定。",
    ),
    "search_angle": (
        SearchAngleModel,
        "在有理网格上按字典序搜索使零形式估计成立的第一组角度参数。",
    ),
}


def _verify(args: VerifyLadderModel) -> str:
    if args.text is not None:
        certificate = checker.verify_text(args.text, args.budget)
    else:
        certificate = checker.verify_file(args.path or checker.BUNDLED_LADDER, args.budget)
    return render(certificate, args.format)


def dispatch_tool(name: str, arguments: dict) -> str:
    """
    执行一个工具调用并返回渲染后的报告

    Raises:
        McpError: 参数错误（INVALID_PARAMS）或执行失败（INTERNAL_ERROR）
    """
    if name not in TOOLS:
        raise McpError(ErrorData(code=INVALID_PARAMS, message=f"未知工具: {name}"))
    model = TOOLS[name][0]
    try:
        args = model(**(arguments or {}))
    except ValueError as e:
        raise McpError(ErrorData(code=INVALID_PARAMS, message=str(e)))

    try:
        if name == "verify_ladder":
            return _verify(args)
        if name == "check_product":
            return render(checker.check_product(args.exponents), args.format)
        if name == "reduce_nullform":
            record = checker.reduce_nullform(args.exponents, args.angle, args.dirac, args.grid)
            return render(record, args.format)
        return render(checker.search_angle(args.exponents, args.grid, args.dirac), args.format)
    except (LadderSyntaxError, ExponentError, SpaceMismatchError, CacheError, ValueError) as e:
        raise McpError(ErrorData(code=INVALID_PARAMS, message=f"输入错误: {str(e)}"))
    except ReductionError as e:
        raise McpError(ErrorData(code=INTERNAL_ERROR, message=f"角度拆分失败: {str(e)}"))
    except Exception as e:
        raise McpError(ErrorData(code=INTERNAL_ERROR, message=f"服务器错误: {str(e)}"))


def verify_prompt(arguments: Optional[dict]) -> GetPromptResult:
    path = (arguments or {}).get("path") or checker.BUNDLED_LADDER
    text = dispatch_tool("verify_ladder", {"path": path})
    return GetPromptResult(
        description="证明脚本验证结果",
        messages=[
            PromptMessage(
                role="user",
                content=TextContent(type="text", text=f"脚本: {path}\n{text}")
            )
        ]
    )


async def serve():
    """运行证明脚本验证MCP服务"""
    server = Server("xsb-ladder")

    @server.list_tools()
    async def list_tools() -> list[Tool]:
        return [
            Tool(name=name, description=description, inputSchema=model.model_json_schema())
            for name, (model, description) in TOOLS.items()
        ]

    @server.list_prompts()
    async def list_prompts() -> list[Prompt]:
        return [
            Prompt(
                name="verify_ladder",
                description=TOOLS["verify_ladder"][1],
                arguments=[
                    PromptArgument(
                        name="path",
                        description="证明脚本文件路径；不提供时验证随包发布的脚本。",
                        required=False
                    ),
                ],
            ),
        ]

    @server.call_tool()
    async def call_tool(name: str, arguments: dict) -> list[TextContent]:
        return [TextContent(type="text", text=dispatch_tool(name, arguments))]

    @server.get_prompt()
    async def get_prompt(name: str, arguments: dict | None) -> GetPromptResult:
        if name != "verify_ladder":
            raise McpError(ErrorData(code=INVALID_PARAMS, message=f"未知提示: {name}"))
        return verify_prompt(arguments)

    options = server.create_initialization_options()
    async with stdio_server() as (read_stream, write_stream):
        await server.run(read_stream, write_stream, options, raise_exceptions=True)
