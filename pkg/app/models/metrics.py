"""时域与频域指标模型"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.exceptions import InvalidParameter


@dataclass
class StepResponse:
    """单位阶跃响应采样，samples[k] 对应 t = k*dt"""
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if not self.dt > 0.0:
            raise InvalidParameter("参数无效: dt must be > 0")
        if self.samples.size == 0:
            raise InvalidParameter("阶跃响应采样不能为空")
        if not np.all(np.isfinite(self.samples)):
            raise InvalidParameter("阶跃响应包含非有限值")

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.size) * self.dt

    def __len__(self):
        return int(self.samples.size)


@dataclass(frozen=True)
class StepMetrics:
    """闭环阶跃响应指标"""
    ts: float                          # 调节时间（秒）
    po: float                          # 超调量（%）
    monotonic: bool                    # 是否单调
    rise_time: Optional[float] = None  # 10%~90% 上升时间（秒）


@dataclass(frozen=True)
class FreqMetrics:
    """频域鲁棒性指标"""
    ms: float      # 最大灵敏度
    mt: float      # 补灵敏度峰值
    pm_deg: float  # 相位裕度（度）
    wgc: float     # 穿越频率（rad/s）


@dataclass(frozen=True)
class FreqSample:
    """频率响应采样点（Nyquist 导出用）"""
    omega: float
    value: complex


@dataclass(frozen=True)
class SweepRow:
    """增益扫描的一行结果"""
    factor: float     # 相对整定增益的倍数
    k: float
    zeta: float
    ts: Optional[float]  # 未进入稳定带时为 None
    po: float
    monotonic: bool
