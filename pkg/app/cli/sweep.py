"""sweep 子命令：Ti = T1 下缩放增益，观察单调性与调节时间的取舍"""
import logging

from app.cli.common import (
    EXIT_OK,
    add_format_argument,
    add_plant_arguments,
    output_format,
    print_document,
    validate_plant,
    yes_no,
)
from app.exceptions import InvalidParameter

logger = logging.getLogger(__name__)

DEFAULT_FACTORS = '0.5,0.8,1,1.2,2'


def register(subparsers):
    """注册 sweep 子命令"""
    parser = subparsers.add_parser('sweep', help='按倍数缩放整定增益并比较阶跃响应')
    add_plant_arguments(parser)
    parser.add_argument('--factors', default=DEFAULT_FACTORS, help=f'增益倍数列表（逗号分隔），默认 {DEFAULT_FACTORS}')
    parser.add_argument('--dt', type=float, default=None, help='仿真步长（秒）')
    parser.add_argument('--band', type=float, default=None, help='稳定带比例')
    add_format_argument(parser)
    parser.set_defaults(func=run)


def parse_factors(text: str):
    """解析增益倍数列表，每个倍数必须为正"""
    try:
        factors = [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise InvalidParameter(f"参数无效: factors must be numbers, got {text!r}")
    if not factors or any(not f > 0.0 for f in factors):
        raise InvalidParameter(f"参数无效: factors must be > 0, got {text!r}")
    return factors


def run(args, services) -> int:
    plant = validate_plant(args)
    fmt = output_format(args, services)
    factors = parse_factors(args.factors)
    logger.info(f"[CLI] sweep: Kp={plant.kp:g}, T1={plant.t1:g}, T2={plant.t2:g}, factors={factors}")

    rows = services.time_domain.gain_sweep(plant, factors, args.dt, args.band)
    doc = {
        'rows': [
            {
                'factor': row.factor,
                'k': row.k,
                'zeta': row.zeta,
                'ts': row.ts,
                'po': row.po,
                'monotonic': row.monotonic,
            }
            for row in rows
        ],
    }
    lines = [f"{'factor':>7} {'K':>10} {'zeta':>8} {'Ts':>8} {'PO%':>8}  Monotonic"]
    for row in rows:
        ts = f"{row.ts:8.3f}" if row.ts is not None else f"{'N/A':>8}"
        lines.append(
            f"{row.factor:7.3g} {row.k:10.4g} {row.zeta:8.4f} {ts} {row.po:8.3f}  {yes_no(row.monotonic)}"
        )
    print_document(doc, fmt, lines)
    return EXIT_OK
