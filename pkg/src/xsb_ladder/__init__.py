"""
xsb_ladder - X^{s,b} 自举证明脚本的精确验证工具

主要组件:
- verify_file / verify_text: 解析并验证证明脚本，生成证书
- check_product: 判定三线性乘积估计
- reduce_nullform / search_angle: 零形式估计的角度拆分与参数搜索
- serve: 启动标准输入输出模式的MCP服务
"""

import sys
import asyncio

from .impl.checker import check_product, reduce_nullform, search_angle, verify_file, verify_text
from .mcp_service import serve

__version__ = '0.1.0'
__all__ = ['verify_file', 'verify_text', 'check_product', 'reduce_nullform', 'search_angle', 'serve']


def main():
    """启动MCP服务"""
    try:
        asyncio.run(serve())
    except KeyboardInterrupt:
        print("\n服务已停止", file=sys.stderr)
    except Exception as e:
        print(f"启动服务时发生错误: {str(e)}", file=sys.stderr)
        sys.exit(1)
