"""异常定义模块

所有分析错误都继承 ValueError，CLI 层统一按参数错误处理，
个别错误（如未进入稳定带）再映射到专门的退出码。
"""


class ControlAnalysisError(ValueError):
    """控制分析基础异常"""


class InvalidParameter(ControlAnalysisError):
    """参数不满足领域约束（如 t2 <= 0）"""


class DegreeUnsupported(ControlAnalysisError):
    """多项式阶次不在求根支持范围内（仅支持 1~3 阶）"""


class EvalAtPole(ControlAnalysisError):
    """在极点处求值，分母为零"""


class CancellationRequired(ControlAnalysisError):
    """需要零极点对消才能使用的公式，但对消条件不成立"""


class NotStrictlyProper(ControlAnalysisError):
    """传递函数不是严格真分式，无法做零初值状态空间仿真"""


class UnstableSystem(ControlAnalysisError):
    """系统存在右半平面极点"""


class NotSettled(ControlAnalysisError):
    """阶跃响应在仿真时长内没有进入稳定带"""


class InvalidRange(ControlAnalysisError):
    """频率搜索区间无效"""


class NotBracketed(ControlAnalysisError):
    """搜索区间两端没有包住目标值"""
