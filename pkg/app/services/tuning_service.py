"""PI 整定服务

闭式整定规则 K = T1/(4 Kp T2), Ti = T1：控制器零点对消慢极点，
剩余二阶闭环取临界阻尼，得到单调且调节时间最短的阶跃响应。
"""
import logging
import math

from app.exceptions import CancellationRequired
from app.models import Plant, PiController, SecondOrderParams
from app.utils.tf_core import Polynomial, RationalTF

logger = logging.getLogger(__name__)

# Ti 与 T1 视为相等的相对容差
CANCELLATION_TI_RTOL = 1e-12


class TuningService:
    """PI 整定与阻尼诊断"""

    def tune_pi(self, plant: Plant) -> PiController:
        """按闭式规则整定 PI 参数

        Args:
            plant: 被控对象

        Returns:
            整定后的控制器
        """
        ctrl = PiController(k=plant.t1 / (4.0 * plant.kp * plant.t2), ti=plant.t1)
        logger.info(f"[整定] Kp={plant.kp:g}, T1={plant.t1:g}, T2={plant.t2:g} -> K={ctrl.k:g}, Ti={ctrl.ti:g}")
        return ctrl

    def damping_params(self, plant: Plant, ctrl: PiController) -> SecondOrderParams:
        """对消后二阶闭环的阻尼比和自然频率

        Raises:
            CancellationRequired: Ti 与 T1 不相等，二阶约化不成立
        """
        if abs(ctrl.ti - plant.t1) > CANCELLATION_TI_RTOL * plant.t1:
            raise CancellationRequired(
                f"阻尼比公式仅在 Ti = T1 时成立 (Ti={ctrl.ti:g}, T1={plant.t1:g})"
            )
        gain = ctrl.k * plant.kp
        zeta = math.sqrt(plant.t1 * plant.t2) / (2.0 * plant.t2 * math.sqrt(gain))
        wn = math.sqrt(gain / (plant.t1 * plant.t2))
        return SecondOrderParams(zeta=zeta, wn=wn)

    def plant_tf(self, plant: Plant) -> RationalTF:
        """对象传递函数 Kp / ((1+sT1)(1+sT2))，分母展开"""
        den = (1.0, plant.t1 + plant.t2, plant.t1 * plant.t2)
        return RationalTF(Polynomial((plant.kp,)), Polynomial(den))

    def controller_tf(self, ctrl: PiController) -> RationalTF:
        """控制器传递函数 K (1 + s Ti) / (s Ti)"""
        return RationalTF(Polynomial((ctrl.k, ctrl.k * ctrl.ti)), Polynomial((0.0, ctrl.ti)))


# 全局整定服务实例
tuning_service = TuningService()
