"""时域仿真服务

阶跃响应数值仿真（可控标准型 + 经典四阶 Runge-Kutta 定步长）、
解析阶跃响应，以及调节时间、超调量、单调性等指标。
"""
import logging
import math
from typing import Callable, Iterable, List, Optional

import numpy as np
from scipy.optimize import bisect

from app.config import Config, config
from app.exceptions import InvalidParameter, NotSettled, NotStrictlyProper, UnstableSystem
from app.models import Plant, PiController, StepMetrics, StepResponse, SweepRow
from app.services.loop_analysis import LoopAnalysisService, loop_analysis_service
from app.utils.tf_core import RationalTF, poly_roots

logger = logging.getLogger(__name__)

# 极点实部超过该值视为不稳定
UNSTABLE_REAL_TOL = 1e-12


def rk4_step(fn: Callable, t: float, x: np.ndarray, u: float, h: float) -> np.ndarray:
    """经典四阶 Runge-Kutta 单步

    Args:
        fn: 动力学方程 f(t, x, u)
        t: 当前时刻
        x: 当前状态
        u: 输入（步内保持不变）
        h: 步长

    Returns:
        下一时刻的状态
    """
    k1 = h * fn(t, x, u)
    k2 = h * fn(t + h / 2, x + k1 / 2, u)
    k3 = h * fn(t + h / 2, x + k2 / 2, u)
    k4 = h * fn(t + h, x + k3, u)
    return x + (k1 + 2 * k2 + 2 * k3 + k4) / 6


def controllable_canonical(g: RationalTF):
    """严格真传递函数的可控标准型实现 (A, B, C)"""
    den = g.den.as_array() / g.den.leading
    n = g.den.degree
    num = np.zeros(n)
    if not g.num.is_zero:
        num[:g.num.degree + 1] = g.num.as_array() / g.den.leading

    a_mat = np.zeros((n, n))
    a_mat[:-1, 1:] = np.eye(n - 1)
    a_mat[-1, :] = -den[:n]
    b_vec = np.zeros(n)
    b_vec[-1] = 1.0
    return a_mat, b_vec, num


class TimeDomainService:
    """阶跃响应仿真与时域指标"""

    def __init__(self, loop: LoopAnalysisService = loop_analysis_service, cfg: Optional[Config] = None):
        """初始化时域服务

        Args:
            loop: 闭环分析服务（提供闭环传递函数）
            cfg: 配置实例，缺省使用全局配置
        """
        self.loop = loop
        self.config = cfg or config

    def default_horizon(self, plant: Plant) -> float:
        """默认仿真时长 horizon_factor * max(T1, 2*T2)"""
        return self.config.get_horizon_factor() * max(plant.t1, 2.0 * plant.t2)

    def simulate_step(self, g: RationalTF, dt: float, horizon: float) -> StepResponse:
        """单位阶跃响应仿真，y[0] 对应 t = 0

        Raises:
            NotStrictlyProper: 传递函数不是严格真分式
            UnstableSystem: 存在实部大于 1e-12 的极点
        """
        if not g.is_strictly_proper:
            raise NotStrictlyProper(f"仅支持严格真传递函数: {g}")
        if not dt > 0.0:
            raise InvalidParameter("参数无效: dt must be > 0")
        if not horizon >= 10.0 * dt:
            raise InvalidParameter("参数无效: horizon must be >= 10*dt")

        n_samples = int(round(horizon / dt)) + 1
        if g.num.is_zero or g.den.degree == 0:
            return StepResponse(dt=dt, samples=np.zeros(n_samples))

        poles = poly_roots(g.den)
        unstable = [p for p in poles if p.real > UNSTABLE_REAL_TOL]
        if unstable:
            raise UnstableSystem(f"系统不稳定，右半平面极点: {unstable}")

        a_mat, b_vec, c_vec = controllable_canonical(g)

        def dynamics(t, x, u):
            return a_mat @ x + b_vec * u

        # 线性定常系统上的 RK4 单步对 (x, u) 线性，先求出一步转移矩阵
        n = a_mat.shape[0]
        step_x = np.column_stack([rk4_step(dynamics, 0.0, e, 0.0, dt) for e in np.eye(n)])
        step_u = rk4_step(dynamics, 0.0, np.zeros(n), 1.0, dt)

        x = np.zeros(n)
        samples = np.empty(n_samples)
        for k in range(n_samples):
            samples[k] = c_vec @ x
            x = step_x @ x + step_u

        logger.info(f"[时域仿真] dt={dt:g}, 时长={horizon:g}s, 采样点数={n_samples}")
        return StepResponse(dt=dt, samples=samples)

    def simulate_closed_loop(
        self,
        plant: Plant,
        ctrl: PiController,
        dt: Optional[float] = None,
        horizon: Optional[float] = None,
    ) -> StepResponse:
        """仿真三阶闭环的阶跃响应"""
        dt = self.config.get_dt() if dt is None else dt
        horizon = self.default_horizon(plant) if horizon is None else horizon
        return self.simulate_step(self.loop.closed_loop(plant, ctrl), dt, horizon)

    @staticmethod
    def analytic_step_tuned(t2: float, t):
        """整定后二阶闭环的解析阶跃响应 1 - exp(-t/(2T2)) (1 + t/(2T2))"""
        tau = np.asarray(t, dtype=float) / (2.0 * t2)
        y = 1.0 - np.exp(-tau) * (1.0 + tau)
        return float(y) if y.ndim == 0 else y

    def final_value(self, r: StepResponse) -> float:
        """终值：最后 final_value_fraction 比例样本的均值"""
        tail = max(1, int(math.ceil(self.config.get_final_value_fraction() * len(r))))
        return float(np.mean(r.samples[-tail:]))

    def settling_time(self, r: StepResponse, band: Optional[float] = None) -> float:
        """调节时间：此后所有样本都落在 ±band 稳定带内的最早网格时刻

        Raises:
            NotSettled: 终值不在 1 的稳定带内，或尾部仍在带外
        """
        band = self.config.get_band() if band is None else band
        if not 0.0 < band < 1.0:
            raise InvalidParameter(f"参数无效: band must be in (0, 1), got {band}")

        y_final = self.final_value(r)
        if abs(y_final - 1.0) > band:
            raise NotSettled(f"终值 {y_final:.6g} 不在 1 的 {band:.1%} 稳定带内")

        outside = np.flatnonzero(np.abs(r.samples - y_final) > band * abs(y_final))
        if outside.size == 0:
            return 0.0
        k = int(outside[-1]) + 1
        if k >= len(r):
            raise NotSettled(f"仿真结束时响应仍在 {band:.1%} 稳定带外")
        return k * r.dt

    def percent_overshoot(self, r: StepResponse) -> float:
        """超调量（%）"""
        y_final = self.final_value(r)
        return max(0.0, (float(np.max(r.samples)) - y_final) / y_final) * 100.0

    def is_monotonic(self, r: StepResponse, tol: Optional[float] = None) -> bool:
        """相邻样本不下降（允许 tol 的数值噪声）"""
        tol = self.config.get_monotonic_tol() if tol is None else tol
        if tol < 0.0:
            raise InvalidParameter("参数无效: tol must be >= 0")
        return bool(np.all(np.diff(r.samples) >= -tol))

    def rise_time(self, r: StepResponse, low: float = 0.1, high: float = 0.9) -> float:
        """上升时间：响应由终值的 low 升到 high 所需时间"""
        y_final = self.final_value(r)
        reached_low = np.flatnonzero(r.samples >= low * y_final)
        reached_high = np.flatnonzero(r.samples >= high * y_final)
        if reached_low.size == 0 or reached_high.size == 0:
            raise NotSettled("响应没有达到上升时间的阈值")
        return (int(reached_high[0]) - int(reached_low[0])) * r.dt

    @staticmethod
    def settling_constant(band: float) -> float:
        """求解 exp(-tau) (1 + tau) = band，调节时间预测值为 2*T2*tau"""
        if not 0.0 < band < 1.0:
            raise InvalidParameter(f"参数无效: band must be in (0, 1), got {band}")
        return bisect(lambda tau: math.exp(-tau) * (1.0 + tau) - band, 0.0, 100.0, xtol=1e-10)

    def step_metrics(self, r: StepResponse, band: Optional[float] = None) -> StepMetrics:
        """汇总阶跃响应指标"""
        return StepMetrics(
            ts=self.settling_time(r, band),
            po=self.percent_overshoot(r),
            monotonic=self.is_monotonic(r),
            rise_time=self.rise_time(r),
        )

    def gain_sweep(
        self,
        plant: Plant,
        factors: Iterable[float],
        dt: Optional[float] = None,
        band: Optional[float] = None,
    ) -> List[SweepRow]:
        """在 Ti = T1 下按倍数缩放整定增益，考察单调性与调节时间

        factor < 1 为过阻尼（更慢），factor > 1 为欠阻尼（出现超调）。
        """
        tuned = self.loop.tuning.tune_pi(plant)
        dt = self.config.get_dt() if dt is None else dt
        rows = []
        for factor in factors:
            ctrl = PiController(k=tuned.k * factor, ti=tuned.ti)
            zeta = self.loop.tuning.damping_params(plant, ctrl).zeta
            # 过阻尼时慢极点变慢，仿真时长相应拉长
            horizon = self.default_horizon(plant) / min(1.0, factor)
            response = self.simulate_closed_loop(plant, ctrl, dt, horizon)
            try:
                ts = self.settling_time(response, band)
            except NotSettled:
                logger.warning(f"[时域仿真] 增益倍数 {factor:g} 在仿真时长内未进入稳定带")
                ts = None
            rows.append(SweepRow(
                factor=factor,
                k=ctrl.k,
                zeta=zeta,
                ts=ts,
                po=self.percent_overshoot(response),
                monotonic=self.is_monotonic(response),
            ))
        return rows


# 全局时域服务实例
time_domain_service = TimeDomainService()
