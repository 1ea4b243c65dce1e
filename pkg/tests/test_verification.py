"""结果表复现服务测试"""
from unittest.mock import patch

import pytest

from app.models import CellCheck, Plant, VerifyOutcome, ParameterRow
from app.services.freq_domain import FrequencyDomainService
from app.services.loop_analysis import LoopAnalysisService
from app.services.time_domain import TimeDomainService
from app.services.verification import REFERENCE_CASES, VerificationService


class TestVerificationService:
    """两张结果表逐格复现"""

    @pytest.fixture
    def service(self):
        loop = LoopAnalysisService()
        return VerificationService(TimeDomainService(loop), FrequencyDomainService(loop))

    def test_cases(self):
        assert [c.plant_id for c in REFERENCE_CASES] == [1, 2, 3, 4, 5, 6]
        assert REFERENCE_CASES[1].plant.t2 == pytest.approx(1.0 / 3.0)

    def test_all_cells_pass(self, service):
        outcome = service.verify(dt=0.005, band=0.02)
        assert outcome.all_pass, outcome.failures()
        assert len(outcome.parameter_rows) == 6
        assert len(outcome.performance_rows) == 6
        assert outcome.failures() == []

    def test_parameter_row_values(self, service):
        row = service.parameter_row(REFERENCE_CASES[5])
        assert row.k == pytest.approx(1.25)
        assert row.ti == pytest.approx(0.5)
        assert [c.name for c in row.cells] == ['K', 'Ti', 'pole1', 'pole2', 'pole3']
        assert row.poles[0].real == pytest.approx(-2.0, rel=1e-8)

    def test_performance_row_values(self, service):
        row = service.performance_row(REFERENCE_CASES[0], dt=0.005, band=0.02)
        assert row.passed
        assert row.ts == pytest.approx(5.835, abs=0.010)
        assert row.monotonic
        assert row.pm == pytest.approx(76.35, abs=0.01)

    def test_other_band_skips_published_ts(self, service):
        """稳定带不是 2% 时参考 Ts 不参与比对"""
        row = service.performance_row(REFERENCE_CASES[3], dt=0.005, band=0.05)
        ts_cell = next(c for c in row.cells if c.name == 'Ts')
        assert ts_cell.skipped
        assert ts_cell.passed
        assert row.passed

    def test_failed_cell_reported(self, service):
        """篡改调节时间后对应单元格失败"""
        with patch.object(service.time_domain, 'settling_time', return_value=9.0):
            row = service.performance_row(REFERENCE_CASES[0], dt=0.005, band=0.02)
        assert not row.passed
        failed = [c.name for c in row.cells if not c.passed]
        assert failed == ['Ts', 'Ts_pred']


class TestVerifyOutcome:
    """复现结论模型"""

    def test_failures_listing(self):
        plant = Plant(kp=1.0, t1=1.0, t2=0.5)
        row = ParameterRow(
            plant_id=1,
            plant=plant,
            k=0.6,
            ti=1.0,
            poles=[-1.0, -1.0, -1.0],
            cells=[
                CellCheck(name='K', actual=0.6, expected=0.5, tolerance=1e-12, passed=False),
                CellCheck(name='Ti', actual=1.0, expected=1.0, tolerance=1e-12, passed=True),
            ],
        )
        outcome = VerifyOutcome(parameter_rows=[row], performance_rows=[], dt=0.005, band=0.02)
        assert not outcome.all_pass
        failures = outcome.failures()
        assert len(failures) == 1
        assert 'K' in failures[0]

    def test_cell_delta(self):
        assert CellCheck(name='Ms', actual=1.2, expected=1.0, tolerance=0.5).delta == pytest.approx(0.2)
        assert CellCheck(name='Ts', actual=1.0).delta is None
