
class XsbLadderError(Exception):
    """基础异常类，所有自定义异常继承自此类"""
    pass

class ExponentError(XsbLadderError):
    """指数运算错误（例如出现 ε² 项、插值参数越界）"""
    pass

class MalformedExponentError(ExponentError):
    """指数字面量格式错误"""
    pass

class SpaceMismatchError(XsbLadderError):
    """空间族、符号或时间带标记不一致"""
    pass

class ReductionError(XsbLadderError):
    """归约步骤相关错误"""
    pass

class EnergyStepError(ReductionError):
    """能量估计前提不满足"""
    pass

class AngleParamsError(ReductionError):
    """角度参数超出 [0, 1/2]"""
    pass

class LadderError(XsbLadderError):
    """证明脚本相关错误"""
    pass

class LadderSyntaxError(LadderError):
    """证明脚本语法错误，携带行列位置和期望的记号"""

    def __init__(self, message: str, line: int = None, column: int = None, expected=None):
        self.line = line
        self.column = column
        self.expected = sorted(expected) if expected else []
        location = ""
        if line is not None:
            location = f"第 {line} 行第 {column} 列: " if column is not None else f"第 {line} 行: "
        super().__init__(f"{location}{message}")

class DuplicateIdentifierError(LadderSyntaxError):
    """重复的标识符"""
    pass

class UnknownTacticError(LadderSyntaxError):
    """未知的策略"""
    pass

class UnknownReferenceError(LadderSyntaxError):
    """引用了未声明的符号、未定义的步骤或不被接受的选项"""
    pass

class CacheError(XsbLadderError):
    """缓存相关错误"""
    pass

class InvariantBreachError(XsbLadderError):
    """内部不变量被破坏"""
    pass
