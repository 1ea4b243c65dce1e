"""CLI 公共部分：退出码、服务装配、参数校验与输出渲染"""
import argparse
import json
from dataclasses import dataclass
from typing import Dict, List, Optional

from app.config import Config
from app.models import Plant, PiController
from app.services.export_service import ExportService
from app.services.freq_domain import FrequencyDomainService
from app.services.loop_analysis import LoopAnalysisService
from app.services.time_domain import TimeDomainService
from app.services.tuning_service import TuningService
from app.services.verification import VerificationService

# 退出码
EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NOT_SETTLED = 3
EXIT_IO = 4

FORMATS = ('text', 'json')


@dataclass
class ServiceBundle:
    """一次命令执行用到的全部服务（共享同一份配置）"""
    config: Config
    tuning: TuningService
    loop: LoopAnalysisService
    time_domain: TimeDomainService
    freq_domain: FrequencyDomainService
    verification: VerificationService
    export: ExportService


def build_services(cfg: Config) -> ServiceBundle:
    """按配置装配服务"""
    tuning = TuningService()
    loop = LoopAnalysisService(tuning, cfg)
    time_domain = TimeDomainService(loop, cfg)
    freq_domain = FrequencyDomainService(loop, cfg)
    return ServiceBundle(
        config=cfg,
        tuning=tuning,
        loop=loop,
        time_domain=time_domain,
        freq_domain=freq_domain,
        verification=VerificationService(time_domain, freq_domain, cfg),
        export=ExportService(time_domain, freq_domain),
    )


def add_plant_arguments(parser: argparse.ArgumentParser):
    """对象参数 --kp --t1 --t2"""
    parser.add_argument('--kp', type=float, required=True, help='对象增益 Kp')
    parser.add_argument('--t1', type=float, required=True, help='慢时间常数 T1（秒）')
    parser.add_argument('--t2', type=float, required=True, help='快时间常数 T2（秒）')


def add_format_argument(parser: argparse.ArgumentParser):
    """输出格式 --format"""
    parser.add_argument('--format', choices=FORMATS, default=None, help='输出格式: text | json')


def validate_plant(args) -> Plant:
    """由命令行参数构造对象，参数非法时抛出 InvalidParameter"""
    return Plant(kp=args.kp, t1=args.t1, t2=args.t2)


def validate_controller(args, services: ServiceBundle, plant: Plant) -> PiController:
    """--k/--ti 缺省时使用整定值"""
    k = getattr(args, 'k', None)
    ti = getattr(args, 'ti', None)
    tuned = services.tuning.tune_pi(plant)
    if k is None and ti is None:
        return tuned
    return PiController(k=tuned.k if k is None else k, ti=tuned.ti if ti is None else ti)


def output_format(args, services: ServiceBundle) -> str:
    fmt = args.format or services.config.get_output_format()
    if fmt not in FORMATS:
        raise ValueError(f"不支持的输出格式: {fmt}. 支持的值: {', '.join(FORMATS)}")
    return fmt


def complex_to_dict(value: complex) -> Dict[str, float]:
    return {'re': float(value.real), 'im': float(value.imag)}


def format_complex(value: complex) -> str:
    if value.imag == 0.0:
        return f"{value.real:.6g}"
    return f"{value.real:.6g}{value.imag:+.6g}j"


def yes_no(flag: bool) -> str:
    return 'YES' if flag else 'NO'


def print_document(doc: Dict, fmt: str, text_lines: Optional[List[str]] = None):
    """json 输出一个文档，text 输出给定行"""
    if fmt == 'json':
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        for line in text_lines or []:
            print(line)
