"""
xsb_ladder.impl - 证明脚本验证实现模块

- exponent_core: 带 ε 的精确指数、空间与嵌入规则
- product_rules: 三线性乘积估计的条件判定
- reduction_engine: 能量估计、对偶改写与角度拆分
- ladder_parser / ladder_verifier: 脚本解析与逐步验证
- numeric_checks: 数值采样检查
"""

from .checker import check_product, reduce_nullform, search_angle, verify_file, verify_text

__all__ = ['verify_file', 'verify_text', 'check_product', 'reduce_nullform', 'search_angle']
