"""数据导出服务：阶跃响应、Nyquist、Bode 数据的 CSV 输出"""
import csv
import logging
import math
import sys
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.models import Plant, PiController, StepResponse
from app.services.freq_domain import FrequencyDomainService, freq_domain_service
from app.services.time_domain import TimeDomainService, time_domain_service

logger = logging.getLogger(__name__)

STEP_HEADER = ('t', 'y', 'y_analytic')
NYQUIST_HEADER = ('omega', 're', 'im')
BODE_HEADER = ('omega', 'mag_L', 'phase_L_deg', 'mag_S', 'mag_T')

Table = Tuple[Sequence[str], List[Tuple[Optional[float], ...]]]

# 控制器参数与整定结果的相对偏差上限，超出时不输出解析响应
TUNED_RTOL = 1e-12


class ExportService:
    """生成并写出可绘图的表格数据"""

    def __init__(
        self,
        time_domain: TimeDomainService = time_domain_service,
        freq_domain: FrequencyDomainService = freq_domain_service,
    ):
        self.time_domain = time_domain
        self.freq_domain = freq_domain

    def step_table(self, plant: Plant, response: StepResponse, ctrl: Optional[PiController] = None) -> Table:
        """阶跃响应与解析响应

        解析响应只对整定控制器成立；ctrl 偏离整定结果时 y_analytic 列留空。
        """
        times = response.times
        if ctrl is None or self.is_tuned(plant, ctrl):
            analytic = [float(v) for v in self.time_domain.analytic_step_tuned(plant.t2, times)]
        else:
            logger.info(f"[数据导出] K={ctrl.k:g}, Ti={ctrl.ti:g} 不是整定结果，y_analytic 列留空")
            analytic = [None] * len(times)
        rows = [(float(t), float(y), ya) for t, y, ya in zip(times, response.samples, analytic)]
        return STEP_HEADER, rows

    def is_tuned(self, plant: Plant, ctrl: PiController) -> bool:
        """ctrl 是否与闭式整定结果一致"""
        tuned = self.time_domain.loop.tuning.tune_pi(plant)
        return (math.isclose(ctrl.k, tuned.k, rel_tol=TUNED_RTOL)
                and math.isclose(ctrl.ti, tuned.ti, rel_tol=TUNED_RTOL))

    def nyquist_table(self, plant: Plant, ctrl: PiController, omega_grid: Sequence[float]) -> Table:
        """闭环 T(jw) 的实部与虚部"""
        closed = self.freq_domain.comp_sensitivity_tf(self.freq_domain.loop.loop_tf(plant, ctrl))
        samples = self.freq_domain.nyquist_points(closed, omega_grid)
        return NYQUIST_HEADER, [(s.omega, s.value.real, s.value.imag) for s in samples]

    def bode_table(self, plant: Plant, ctrl: PiController, omega_grid: Sequence[float]) -> Table:
        """回路幅相特性及 |S|、|T|"""
        data = self.freq_domain.bode_points(self.freq_domain.loop.loop_tf(plant, ctrl), omega_grid)
        columns = np.column_stack([data[name] for name in BODE_HEADER])
        return BODE_HEADER, [tuple(float(v) for v in row) for row in columns]

    @staticmethod
    def write_csv(header: Sequence[str], rows: Iterable[Sequence[Optional[float]]], out_path: Optional[str] = None) -> int:
        """写出 CSV（逗号分隔、LF 换行、完整精度），out_path 为空时写到标准输出

        Returns:
            写出的数据行数

        Raises:
            OSError: 文件写入失败
        """
        if out_path is None:
            return ExportService._write_rows(sys.stdout, header, rows)
        with open(out_path, 'w', newline='', encoding='utf-8') as f:
            count = ExportService._write_rows(f, header, rows)
        logger.info(f"[数据导出] 已写出 {count} 行到 {out_path}")
        return count

    @staticmethod
    def _write_rows(stream, header, rows) -> int:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow(['' if v is None else repr(float(v)) for v in row])
            count += 1
        return count


# 全局导出服务实例
export_service = ExportService()
