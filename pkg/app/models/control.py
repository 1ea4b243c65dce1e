"""被控对象与控制器模型"""
import math
from dataclasses import dataclass, field
from typing import List, Tuple

from app.exceptions import InvalidParameter
from app.utils.tf_core import Polynomial


def _require_positive(name: str, value: float) -> float:
    """校验参数为有限正数"""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidParameter(f"参数无效: {name} must be a number, got {value!r}")
    if not math.isfinite(value) or value <= 0.0:
        raise InvalidParameter(f"参数无效: {name} must be > 0")
    return value


@dataclass(frozen=True)
class Plant:
    """二阶稳定被控对象 Kp / ((1 + s*T1)(1 + s*T2))

    构造时自动交换时间常数，保证 t1 >= t2（t1 为慢极点）。
    """
    kp: float  # 对象增益
    t1: float  # 慢时间常数（秒）
    t2: float  # 快时间常数（秒）

    def __post_init__(self):
        kp = _require_positive('kp', self.kp)
        t1 = _require_positive('t1', self.t1)
        t2 = _require_positive('t2', self.t2)
        if t1 < t2:
            t1, t2 = t2, t1
        object.__setattr__(self, 'kp', kp)
        object.__setattr__(self, 't1', t1)
        object.__setattr__(self, 't2', t2)


@dataclass(frozen=True)
class PiController:
    """PI 控制器 K (1 + 1/(s*Ti))"""
    k: float   # 比例增益
    ti: float  # 积分时间（秒）

    def __post_init__(self):
        object.__setattr__(self, 'k', _require_positive('k', self.k))
        object.__setattr__(self, 'ti', _require_positive('ti', self.ti))


@dataclass(frozen=True)
class SecondOrderParams:
    """对消后二阶闭环的阻尼比与自然频率"""
    zeta: float  # 阻尼比
    wn: float    # 自然频率（rad/s）


@dataclass
class ClosedLoopReport:
    """闭环极点分析结果"""
    char_poly: Polynomial                 # 闭环特征多项式（首一三次）
    poles: List[complex]                  # 三个闭环极点
    cancellation_detected: bool           # 控制器零点是否与某个闭环极点重合
    vieta_residuals: Tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))
