"""tune 子命令：闭式 PI 整定"""
import logging

from app.cli.common import (
    EXIT_OK,
    add_format_argument,
    add_plant_arguments,
    output_format,
    print_document,
    validate_plant,
)

logger = logging.getLogger(__name__)


def register(subparsers):
    """注册 tune 子命令"""
    parser = subparsers.add_parser('tune', help='按闭式规则整定 PI 参数')
    add_plant_arguments(parser)
    add_format_argument(parser)
    parser.set_defaults(func=run)


def run(args, services) -> int:
    plant = validate_plant(args)
    fmt = output_format(args, services)
    logger.info(f"[CLI] tune: Kp={plant.kp:g}, T1={plant.t1:g}, T2={plant.t2:g}")

    ctrl = services.tuning.tune_pi(plant)
    params = services.tuning.damping_params(plant, ctrl)
    doc = {
        'kp': plant.kp,
        't1': plant.t1,
        't2': plant.t2,
        'k': ctrl.k,
        'ti': ctrl.ti,
        'zeta': params.zeta,
        'wn': params.wn,
    }
    print_document(doc, fmt, [
        f"K    = {ctrl.k:.6g}",
        f"Ti   = {ctrl.ti:.6g} s",
        f"zeta = {params.zeta:.6g}",
        f"wn   = {params.wn:.6g} rad/s",
    ])
    return EXIT_OK
