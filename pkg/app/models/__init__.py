"""领域模型"""
from .control import Plant, PiController, SecondOrderParams, ClosedLoopReport
from .metrics import StepResponse, StepMetrics, FreqMetrics, FreqSample, SweepRow
from .verification import CellCheck, ParameterRow, PerformanceRow, VerifyOutcome

__all__ = [
    'Plant', 'PiController', 'SecondOrderParams', 'ClosedLoopReport',
    'StepResponse', 'StepMetrics', 'FreqMetrics', 'FreqSample', 'SweepRow',
    'CellCheck', 'ParameterRow', 'PerformanceRow', 'VerifyOutcome',
]
