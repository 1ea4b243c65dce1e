"""参考结果表复现服务

对六个内置对象重新计算对象/控制器参数表与闭环性能指标表的每个单元格，
并与参考值逐格比对。
"""
import logging
from dataclasses import dataclass
from typing import List, Optional

from app.config import Config, config
from app.models import CellCheck, Plant, ParameterRow, PerformanceRow, VerifyOutcome
from app.services.freq_domain import FrequencyDomainService, freq_domain_service
from app.services.time_domain import TimeDomainService, time_domain_service

logger = logging.getLogger(__name__)

# 比对容差
K_TI_TOL = 1e-12
POLE_RTOL = 1e-8
TS_TOL = 0.010
PO_MAX = 1e-6
MT_TOL = 1e-6
MS_TOL = 5e-4
PM_TOL = 0.01

# 参考调节时间基于 2% 稳定带
REFERENCE_BAND = 0.02
REFERENCE_MS = 1.155
REFERENCE_MT = 1.000
REFERENCE_PM = 76.35


@dataclass(frozen=True)
class ReferenceCase:
    """参考结果表中的一行"""
    plant_id: int
    plant: Plant
    k: float
    ti: float
    p1: float
    p23: float
    ts: float


# 第二个对象的 T2 取 1/3（传递函数写作 1/(1+s/3)）
REFERENCE_CASES = (
    ReferenceCase(1, Plant(kp=1.0, t1=1.0, t2=0.5), k=0.50, ti=1.0, p1=-1.0, p23=-1.00, ts=5.835),
    ReferenceCase(2, Plant(kp=1.0, t1=1.0, t2=1.0 / 3.0), k=0.75, ti=1.0, p1=-1.0, p23=-1.50, ts=3.890),
    ReferenceCase(3, Plant(kp=1.0, t1=1.0, t2=0.2), k=1.25, ti=1.0, p1=-1.0, p23=-2.50, ts=2.335),
    ReferenceCase(4, Plant(kp=1.0, t1=1.0, t2=0.1), k=2.50, ti=1.0, p1=-1.0, p23=-5.00, ts=1.170),
    ReferenceCase(5, Plant(kp=1.0, t1=1.0, t2=0.05), k=5.00, ti=1.0, p1=-1.0, p23=-10.00, ts=0.585),
    ReferenceCase(6, Plant(kp=1.0, t1=0.5, t2=0.1), k=1.25, ti=0.5, p1=-2.0, p23=-5.00, ts=1.170),
)


def _check(name: str, actual: float, expected: float, tolerance: float) -> CellCheck:
    return CellCheck(
        name=name,
        actual=actual,
        expected=expected,
        tolerance=tolerance,
        passed=abs(actual - expected) <= tolerance,
    )


class VerificationService:
    """逐格复现两张结果表"""

    def __init__(
        self,
        time_domain: TimeDomainService = time_domain_service,
        freq_domain: FrequencyDomainService = freq_domain_service,
        cfg: Optional[Config] = None,
    ):
        """初始化复现服务

        Args:
            time_domain: 时域服务
            freq_domain: 频域服务（其 loop 提供整定与闭环分析）
            cfg: 配置实例，缺省使用全局配置
        """
        self.time_domain = time_domain
        self.freq_domain = freq_domain
        self.loop = freq_domain.loop
        self.config = cfg or config

    def parameter_row(self, case: ReferenceCase) -> ParameterRow:
        """对象参数、控制器参数与闭环极点"""
        ctrl = self.loop.tuning.tune_pi(case.plant)
        report = self.loop.analyze_closed_loop(case.plant, ctrl)
        poles = sorted(report.poles, key=lambda p: (p.real, p.imag), reverse=True)
        expected = sorted([case.p1, case.p23, case.p23], reverse=True)

        cells = [
            _check('K', ctrl.k, case.k, K_TI_TOL),
            _check('Ti', ctrl.ti, case.ti, K_TI_TOL),
        ]
        for i, (pole, target) in enumerate(zip(poles, expected), start=1):
            cells.append(CellCheck(
                name=f'pole{i}',
                actual=pole.real,
                expected=target,
                tolerance=POLE_RTOL * abs(target),
                passed=abs(pole - target) <= POLE_RTOL * abs(target),
            ))
        return ParameterRow(plant_id=case.plant_id, plant=case.plant, k=ctrl.k, ti=ctrl.ti, poles=poles, cells=cells)

    def performance_row(self, case: ReferenceCase, dt: float, band: float) -> PerformanceRow:
        """闭环性能指标"""
        plant = case.plant
        ctrl = self.loop.tuning.tune_pi(plant)
        response = self.time_domain.simulate_closed_loop(plant, ctrl, dt)
        ts = self.time_domain.settling_time(response, band)
        po = self.time_domain.percent_overshoot(response)
        monotonic = self.time_domain.is_monotonic(response)
        freq = self.freq_domain.robustness_report(plant, ctrl)

        predicted = 2.0 * plant.t2 * self.time_domain.settling_constant(band)
        if band == REFERENCE_BAND:
            ts_cell = _check('Ts', ts, case.ts, TS_TOL)
        else:
            ts_cell = CellCheck(name='Ts', actual=ts)
        cells = [
            ts_cell,
            _check('Ts_pred', ts, predicted, 2.0 * dt),
            CellCheck(name='PO', actual=po, expected=0.0, tolerance=PO_MAX, passed=po <= PO_MAX),
            CellCheck(name='Monotonic', actual=float(monotonic), expected=1.0, tolerance=0.0, passed=monotonic),
            _check('Mt', freq.mt, REFERENCE_MT, MT_TOL),
            _check('Ms', freq.ms, REFERENCE_MS, MS_TOL),
            _check('PM', freq.pm_deg, REFERENCE_PM, PM_TOL),
        ]
        return PerformanceRow(
            plant_id=case.plant_id,
            plant=plant,
            ts=ts,
            po=po,
            monotonic=monotonic,
            mt=freq.mt,
            ms=freq.ms,
            pm=freq.pm_deg,
            cells=cells,
        )

    def verify(self, dt: Optional[float] = None, band: Optional[float] = None) -> VerifyOutcome:
        """复现全部六个对象的两张表"""
        dt = self.config.get_dt() if dt is None else dt
        band = self.config.get_band() if band is None else band

        logger.info("=" * 60)
        logger.info(f"[结果复现] 开始复现，dt={dt:g}s, 稳定带={band:.1%}")
        params: List[ParameterRow] = []
        perf: List[PerformanceRow] = []
        for case in REFERENCE_CASES:
            params.append(self.parameter_row(case))
            perf.append(self.performance_row(case, dt, band))
            status = '✓' if params[-1].passed and perf[-1].passed else '✗'
            logger.info(f"[结果复现]   ├─ 对象{case.plant_id}: {status}")

        outcome = VerifyOutcome(parameter_rows=params, performance_rows=perf, dt=dt, band=band)
        if outcome.all_pass:
            logger.info("[结果复现]   └─ 全部单元格通过")
        else:
            for failure in outcome.failures():
                logger.warning(f"[结果复现]   └─ {failure}")
        logger.info("=" * 60)
        return outcome


# 全局复现服务实例
verification_service = VerificationService()
