"""
模块名称: Protocol Errors (协议异常)
功能描述:

    定义整个库使用的异常层次。
    库函数只负责抛出，由 CLI 捕获后记录日志并映射为退出码。

设计理念:

    1.  **错误隔离**: 自定义异常类，明确区分参数错误、非法量子态、局域性违规和不可能分支。
    2.  **统一基类**: 所有异常继承 `ProtocolError`，调用方可以一次性捕获。
"""


# [自定义异常] ===========================================================================================================
class ProtocolError(Exception):
    """协议库基础异常"""
    pass

class UsageError(ProtocolError):
    """参数非法：索引越界、空保留集、N 超出范围等"""
    pass

class DimensionMismatchError(UsageError):
    """两个对象的量子比特数不一致"""
    pass

class InvalidStateError(ProtocolError):
    """量子态或算符不满足不变量（归一化、厄米、半正定、幺正）"""
    pass

class LocalityError(ProtocolError):
    """修正操作作用在参与方不拥有的量子比特上，且未允许非局域操作"""
    pass

class BranchImpossibleError(ProtocolError):
    """试图执行概率为零的测量分支"""
    pass

class UnsupportedStateError(ProtocolError):
    """未知态的类型不被该协议支持"""
    pass

class CapacityMismatchError(ProtocolError):
    """Holevo 计算结果与闭式公式不一致"""
    pass

class VerificationError(ProtocolError):
    """校验套件中的某个恒等式不成立"""
    pass
