from typing import Dict, List, Optional, Type

from .exceptions import UnknownTacticError
from .tactics_base import BaseTactic


class TacticFactory:
    """策略工厂，负责按名称创建策略"""

    # 策略注册表
    _tactics: Dict[str, Type[BaseTactic]] = {}

    @classmethod
    def initialize(cls):
        """初始化工厂，注册内置策略"""
        from .tactics_builtin import BUILTIN_TACTICS

        for tactic_class in BUILTIN_TACTICS:
            cls.register_tactic(tactic_class.NAME, tactic_class)

    @classmethod
    def register_tactic(cls, name: str, tactic_class: Type[BaseTactic]):
        """
        注册策略

        Args:
            name: 策略名称
            tactic_class: 策略类
        """
        cls._tactics[name] = tactic_class

    @classmethod
    def create_tactic(cls, name: str, line: Optional[int] = None, column: Optional[int] = None) -> BaseTactic:
        """
        创建策略

        Args:
            name: 策略名称
            line: 出错时报告的行号
            column: 出错时报告的列号

        Returns:
            策略实例

        Raises:
            UnknownTacticError: 策略未注册
        """
        # 确保工厂已初始化
        if not cls._tactics:
            cls.initialize()

        tactic_class = cls._tactics.get(name)
        if not tactic_class:
            raise UnknownTacticError(f"未知的策略: {name}", line, column, cls.names())
        return tactic_class()

    @classmethod
    def is_registered(cls, name: str) -> bool:
        if not cls._tactics:
            cls.initialize()
        return name in cls._tactics

    @classmethod
    def names(cls) -> List[str]:
        return sorted(cls._tactics)
