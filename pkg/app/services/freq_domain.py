"""频域分析服务

灵敏度/补灵敏度函数、峰值搜索、穿越频率与相位裕度，
以及 Nyquist/Bode 数据。数值搜索独立于闭式结果，二者互相校验。
"""
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from app.config import Config, config
from app.exceptions import InvalidRange, NotBracketed
from app.models import FreqMetrics, FreqSample, Plant, PiController
from app.services.loop_analysis import LoopAnalysisService, loop_analysis_service
from app.utils.search import golden_section_search
from app.utils.tf_core import (
    EVAL_FLOOR,
    RationalTF,
    poly_add,
    poly_eval,
    tf_eval,
    tf_eval_many,
    tf_unity_feedback,
)

logger = logging.getLogger(__name__)

# 整定后闭环的闭式鲁棒性常数
MS_EXACT = 2.0 / math.sqrt(3.0)
MT_EXACT = 1.0
U_GC_SQUARED = (math.sqrt(5.0) - 2.0) / 4.0
PM_EXACT_DEG = 90.0 - math.degrees(math.atan(math.sqrt(U_GC_SQUARED)))

# 自动寻找穿越区间时的最大扩展次数（每次十倍）
MAX_BRACKET_EXPANSIONS = 30


def _origin_multiplicity(coeffs: Sequence[float]) -> int:
    """多项式在 s = 0 处的根重数"""
    count = 0
    for c in coeffs[:-1]:
        if c != 0.0:
            break
        count += 1
    return count


class FrequencyDomainService:
    """频域鲁棒性指标"""

    def __init__(self, loop: LoopAnalysisService = loop_analysis_service, cfg: Optional[Config] = None):
        """初始化频域服务

        Args:
            loop: 闭环分析服务（提供回路传递函数）
            cfg: 配置实例，缺省使用全局配置
        """
        self.loop = loop
        self.config = cfg or config

    @staticmethod
    def sensitivity_tf(l: RationalTF) -> RationalTF:
        """灵敏度函数 S = den_l / (num_l + den_l)"""
        return RationalTF(l.den, poly_add(l.num, l.den))

    @staticmethod
    def comp_sensitivity_tf(l: RationalTF) -> RationalTF:
        """补灵敏度函数 T = num_l / (num_l + den_l)"""
        return tf_unity_feedback(l)

    @staticmethod
    def closed_form_sensitivity_mag(u):
        """整定后 |S| 关于归一化频率 u = omega*T2 的闭式表达"""
        u = np.asarray(u, dtype=float)
        mag = 4.0 * u * np.sqrt(1.0 + u * u) / (1.0 + 4.0 * u * u)
        return float(mag) if mag.ndim == 0 else mag

    def default_range(self, t2: float, span_decades: Optional[float] = None) -> Tuple[float, float]:
        """以 1/T2 为中心的搜索区间"""
        span = self.config.get_span_decades() if span_decades is None else span_decades
        return 10.0 ** (-span) / t2, 10.0 ** span / t2

    def default_grid(self, t2: float, span_decades: Optional[float] = None, points: Optional[int] = None) -> np.ndarray:
        """导出用对数网格"""
        span = self.config.get_export_span_decades() if span_decades is None else span_decades
        points = points or self.config.get_export_points()
        return np.logspace(-span, span, points) / t2

    def magnitude_peak(
        self,
        g: RationalTF,
        omega_lo: float,
        omega_hi: float,
        points_per_decade: Optional[int] = None,
    ) -> Tuple[float, float]:
        """在 [omega_lo, omega_hi] 上搜索 |g(jw)| 的最大值

        对数网格粗搜后在最大点邻域做黄金分割细化。最大值落在低频端时，
        若 omega -> 0 的极限有限，则取该极限作为上确界。

        Returns:
            (峰值, 峰值频率)

        Raises:
            InvalidRange: 区间不满足 0 < omega_lo < omega_hi
        """
        if not 0.0 < omega_lo < omega_hi:
            raise InvalidRange(f"频率区间无效: [{omega_lo}, {omega_hi}]")

        per_decade = points_per_decade or self.config.get_points_per_decade()
        n = max(2000, int(math.ceil(math.log10(omega_hi / omega_lo) * per_decade)) + 1)
        grid = np.geomspace(omega_lo, omega_hi, n)
        mags = np.abs(tf_eval_many(g, grid))
        i = int(np.argmax(mags))

        if i == 0:
            peak = float(mags[0])
            if abs(poly_eval(g.den, 0.0)) >= EVAL_FLOOR:
                peak = max(peak, abs(tf_eval(g, 0.0)))
            return peak, omega_lo
        if i == n - 1:
            return float(mags[-1]), omega_hi

        # 在 ln(omega) 上细化，区间宽度即相对频率容差
        lo, hi = golden_section_search(
            lambda x: -abs(tf_eval(g, math.exp(x))),
            math.log(grid[i - 1]),
            math.log(grid[i + 1]),
            tol=self.config.get_peak_rtol(),
        )
        omega_at = math.exp(0.5 * (lo + hi))
        peak = abs(tf_eval(g, omega_at))
        if peak < mags[i]:
            return float(mags[i]), float(grid[i])
        return peak, omega_at

    def gain_crossover(self, l: RationalTF, omega_lo: float, omega_hi: float) -> float:
        """在对数频率上二分求 |L(jw)| = 1 的穿越频率

        Raises:
            InvalidRange: 区间无效
            NotBracketed: 区间两端没有包住 |L| = 1
        """
        if not 0.0 < omega_lo < omega_hi:
            raise InvalidRange(f"频率区间无效: [{omega_lo}, {omega_hi}]")

        def log_gain(x):
            return math.log(abs(tf_eval(l, math.exp(x))))

        x_lo, x_hi = math.log(omega_lo), math.log(omega_hi)
        if not log_gain(x_lo) > 0.0 > log_gain(x_hi):
            raise NotBracketed(f"|L| 在 [{omega_lo:g}, {omega_hi:g}] 内没有穿越 1")
        return math.exp(bisect(log_gain, x_lo, x_hi, xtol=1e-14, maxiter=200))

    def crossover_bracket(self, l: RationalTF) -> Tuple[float, float]:
        """从 1 rad/s 出发按十倍扩展，寻找包住穿越频率的区间"""
        lo = hi = 1.0
        for _ in range(MAX_BRACKET_EXPANSIONS):
            if abs(tf_eval(l, lo)) > 1.0:
                break
            lo /= 10.0
        for _ in range(MAX_BRACKET_EXPANSIONS):
            if abs(tf_eval(l, hi)) < 1.0:
                break
            hi *= 10.0
        return lo, hi

    def unwrapped_phase_deg(self, l: RationalTF, omegas: Sequence[float]) -> np.ndarray:
        """连续展开的相位（度），以低频渐近线 -90° × 积分器个数 为基准"""
        values = tf_eval_many(l, omegas)
        phase = np.unwrap(np.angle(values))
        integrators = _origin_multiplicity(l.den.coeffs) - _origin_multiplicity(l.num.coeffs)
        anchor = -0.5 * math.pi * integrators
        phase += 2.0 * math.pi * round((anchor - phase[0]) / (2.0 * math.pi))
        return np.degrees(phase)

    def crossover_and_margin(
        self,
        l: RationalTF,
        omega_lo: Optional[float] = None,
        omega_hi: Optional[float] = None,
    ) -> Tuple[float, float]:
        """穿越频率与相位裕度

        Returns:
            (穿越频率 rad/s, 相位裕度 度)
        """
        if omega_lo is None or omega_hi is None:
            omega_lo, omega_hi = self.crossover_bracket(l)
        wgc = self.gain_crossover(l, omega_lo, omega_hi)

        per_decade = self.config.get_points_per_decade()
        n = max(2, int(math.ceil(math.log10(wgc / omega_lo) * per_decade)) + 1)
        phase = self.unwrapped_phase_deg(l, np.geomspace(omega_lo, wgc, n))
        return wgc, 180.0 + float(phase[-1])

    def phase_margin(
        self,
        l: RationalTF,
        omega_lo: Optional[float] = None,
        omega_hi: Optional[float] = None,
    ) -> float:
        """相位裕度（度）"""
        return self.crossover_and_margin(l, omega_lo, omega_hi)[1]

    @staticmethod
    def nyquist_points(g: RationalTF, omega_grid: Sequence[float]) -> List[FreqSample]:
        """频率响应采样（Nyquist 图数据）"""
        grid = np.asarray(omega_grid, dtype=float)
        if grid.size == 0 or np.any(grid <= 0.0) or np.any(np.diff(grid) <= 0.0):
            raise InvalidRange("频率网格必须为严格递增的正数")
        values = tf_eval_many(g, grid)
        return [FreqSample(omega=float(w), value=complex(v)) for w, v in zip(grid, values)]

    def bode_points(self, l: RationalTF, omega_grid: Sequence[float]) -> Dict[str, np.ndarray]:
        """回路幅相特性及 |S|、|T|（Bode 数据）"""
        grid = np.asarray(omega_grid, dtype=float)
        if grid.size == 0 or np.any(grid <= 0.0) or np.any(np.diff(grid) <= 0.0):
            raise InvalidRange("频率网格必须为严格递增的正数")
        return {
            'omega': grid,
            'mag_L': np.abs(tf_eval_many(l, grid)),
            'phase_L_deg': self.unwrapped_phase_deg(l, grid),
            'mag_S': np.abs(tf_eval_many(self.sensitivity_tf(l), grid)),
            'mag_T': np.abs(tf_eval_many(self.comp_sensitivity_tf(l), grid)),
        }

    def robustness_report(self, plant: Plant, ctrl: PiController) -> FreqMetrics:
        """数值计算 Ms、Mt、相位裕度与穿越频率"""
        l = self.loop.loop_tf(plant, ctrl)
        omega_lo, omega_hi = self.default_range(plant.t2)

        ms, _ = self.magnitude_peak(self.sensitivity_tf(l), omega_lo, omega_hi)
        mt, _ = self.magnitude_peak(self.comp_sensitivity_tf(l), omega_lo, omega_hi)
        try:
            wgc, pm_deg = self.crossover_and_margin(l, omega_lo, omega_hi)
        except NotBracketed:
            # 低增益或高增益时穿越频率落在默认频段之外
            logger.info(f"[频域分析] 默认频段 [{omega_lo:.3g}, {omega_hi:.3g}] 未包含穿越频率，改为自动扩展")
            wgc, pm_deg = self.crossover_and_margin(l)

        logger.info(f"[频域分析] Ms={ms:.6f}, Mt={mt:.6f}, PM={pm_deg:.4f}°, wgc={wgc:.6g} rad/s")
        return FreqMetrics(ms=ms, mt=mt, pm_deg=pm_deg, wgc=wgc)


# 全局频域服务实例
freq_domain_service = FrequencyDomainService()
