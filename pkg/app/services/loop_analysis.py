"""闭环分析服务：回路/闭环传递函数、闭环极点、Vieta 关系与零极点对消"""
import logging
from typing import Optional

from app.config import Config, config
from app.models import ClosedLoopReport, Plant, PiController
from app.services.tuning_service import TuningService, tuning_service
from app.utils.tf_core import (
    Polynomial,
    RationalTF,
    poly_backward_error,
    poly_roots,
    tf_cancel,
    tf_series,
)

logger = logging.getLogger(__name__)

# 控制器零点作为特征多项式根的后向误差阈值（三重根附近极点本身病态，改看残差）
CANCELLATION_BACKWARD_TOL = 1e-12


class LoopAnalysisService:
    """闭环结构分析"""

    def __init__(self, tuning: TuningService = tuning_service, cfg: Optional[Config] = None):
        """初始化闭环分析服务

        Args:
            tuning: 整定服务实例（提供对象与控制器传递函数）
            cfg: 配置实例，缺省使用全局配置
        """
        self.tuning = tuning
        self.config = cfg or config

    def characteristic_poly(self, plant: Plant, ctrl: PiController) -> Polynomial:
        """闭环特征多项式（首一三次，升幂存放）"""
        gain = ctrl.k * plant.kp
        t12 = plant.t1 * plant.t2
        return Polynomial((
            gain / (t12 * ctrl.ti),
            (1.0 + gain) / t12,
            1.0 / plant.t1 + 1.0 / plant.t2,
            1.0,
        ))

    def closed_loop(self, plant: Plant, ctrl: PiController) -> RationalTF:
        """三阶闭环传递函数，分子 a0 (1 + s Ti)，分母为特征多项式，直流增益恰为 1"""
        char_poly = self.characteristic_poly(plant, ctrl)
        a0 = char_poly.coeffs[0]
        return RationalTF(Polynomial((a0, a0 * ctrl.ti)), char_poly)

    def loop_tf(self, plant: Plant, ctrl: PiController) -> RationalTF:
        """回路传递函数 C(s) P(s)，不做约分"""
        return tf_series(self.tuning.controller_tf(ctrl), self.tuning.plant_tf(plant))

    def reduced_closed_loop(self, plant: Plant, ctrl: PiController) -> RationalTF:
        """显式约去 (s + 1/Ti) 后的二阶闭环

        Raises:
            CancellationRequired: 控制器零点不是闭环极点
        """
        return tf_cancel(self.closed_loop(plant, ctrl), -1.0 / ctrl.ti)

    def analyze_closed_loop(self, plant: Plant, ctrl: PiController) -> ClosedLoopReport:
        """求闭环极点，校验 Vieta 关系并检测零极点对消"""
        char_poly = self.characteristic_poly(plant, ctrl)
        poles = poly_roots(char_poly)
        a0, a1, a2, _ = char_poly.coeffs

        p1, p2, p3 = poles
        vieta_residuals = (
            abs((p1 + p2 + p3) - (-a2)),
            abs((p1 * p2 + p1 * p3 + p2 * p3) - a1),
            abs((p1 * p2 * p3) - (-a0)),
        )

        zero = -1.0 / ctrl.ti
        rtol = self.config.get_cancellation_rtol()
        pole_match = any(abs(p - zero) <= rtol * abs(zero) for p in poles)
        residual_match = poly_backward_error(char_poly, zero) <= CANCELLATION_BACKWARD_TOL
        cancellation = pole_match or residual_match

        logger.info(
            f"[闭环分析] 极点: {', '.join(f'{p.real:.6g}{p.imag:+.3g}j' for p in poles)}, "
            f"对消: {'是' if cancellation else '否'}"
        )
        return ClosedLoopReport(
            char_poly=char_poly,
            poles=poles,
            cancellation_detected=cancellation,
            vieta_residuals=vieta_residuals,
        )


# 全局闭环分析服务实例
loop_analysis_service = LoopAnalysisService()
