"""参考结果表复现结果模型"""
from dataclasses import dataclass, field
from typing import List, Optional

from .control import Plant


@dataclass(frozen=True)
class CellCheck:
    """单元格比对结果，expected 为 None 表示该项不参与比对（N/A）"""
    name: str
    actual: float
    expected: Optional[float] = None
    tolerance: Optional[float] = None
    passed: bool = True

    @property
    def skipped(self) -> bool:
        return self.expected is None

    @property
    def delta(self) -> Optional[float]:
        if self.expected is None:
            return None
        return self.actual - self.expected


@dataclass
class ParameterRow:
    """对象参数、控制器参数与闭环极点"""
    plant_id: int
    plant: Plant
    k: float
    ti: float
    poles: List[complex]
    cells: List[CellCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(cell.passed for cell in self.cells)


@dataclass
class PerformanceRow:
    """闭环性能指标"""
    plant_id: int
    plant: Plant
    ts: float
    po: float
    monotonic: bool
    mt: float
    ms: float
    pm: float
    cells: List[CellCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(cell.passed for cell in self.cells)


@dataclass
class VerifyOutcome:
    """复现结论，all_pass 为所有行结论的合取"""
    parameter_rows: List[ParameterRow]
    performance_rows: List[PerformanceRow]
    dt: float
    band: float

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.parameter_rows) and all(r.passed for r in self.performance_rows)

    def failures(self) -> List[str]:
        """列出所有失败的单元格"""
        failed = []
        for table, rows in (("参数表", self.parameter_rows), ("性能表", self.performance_rows)):
            for row in rows:
                for cell in row.cells:
                    if not cell.passed:
                        failed.append(
                            f"{table} 对象{row.plant_id} {cell.name}: "
                            f"实际 {cell.actual:.6g}, 期望 {cell.expected}, 容差 {cell.tolerance}"
                        )
        return failed
