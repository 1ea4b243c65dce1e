"""analyze 子命令：闭环极点、对消结构与鲁棒性指标"""
import logging

from app.cli.common import (
    EXIT_OK,
    add_format_argument,
    add_plant_arguments,
    complex_to_dict,
    format_complex,
    output_format,
    print_document,
    validate_controller,
    validate_plant,
    yes_no,
)
from app.exceptions import CancellationRequired

logger = logging.getLogger(__name__)

UNSTABLE_NOTE = '闭环不稳定：存在实部非负的极点，Ms、Mt、PM 不具备鲁棒性含义'


def register(subparsers):
    """注册 analyze 子命令"""
    parser = subparsers.add_parser('analyze', help='分析闭环极点、零极点对消与鲁棒性')
    add_plant_arguments(parser)
    parser.add_argument('--k', type=float, default=None, help='控制器增益 K（缺省为整定值）')
    parser.add_argument('--ti', type=float, default=None, help='积分时间 Ti（缺省为整定值）')
    add_format_argument(parser)
    parser.set_defaults(func=run)


def damping_note(services, plant, ctrl):
    """阻尼比及说明；Ti != T1 时二阶约化不成立，阻尼比为 None"""
    try:
        zeta = services.tuning.damping_params(plant, ctrl).zeta
    except CancellationRequired:
        return None, 'Ti != T1: 无零极点对消，闭环保持三阶，阻尼比公式不适用'
    if abs(zeta - 1.0) <= 1e-9:
        return zeta, '临界阻尼 (zeta = 1): 单调响应且调节时间最短'
    if zeta < 1.0:
        return zeta, f'欠阻尼 (zeta = {zeta:.6g} < 1): 响应出现超调，不再单调'
    return zeta, f'过阻尼 (zeta = {zeta:.6g} > 1): 响应单调但调节时间更长'


def run(args, services) -> int:
    plant = validate_plant(args)
    ctrl = validate_controller(args, services, plant)
    fmt = output_format(args, services)
    logger.info(f"[CLI] analyze: Kp={plant.kp:g}, T1={plant.t1:g}, T2={plant.t2:g}, K={ctrl.k:g}, Ti={ctrl.ti:g}")

    report = services.loop.analyze_closed_loop(plant, ctrl)
    metrics = services.freq_domain.robustness_report(plant, ctrl)
    zeta, note = damping_note(services, plant, ctrl)
    stable = all(p.real < 0.0 for p in report.poles)
    if not stable:
        logger.warning(f"[CLI] 闭环不稳定: K={ctrl.k:g}, Ti={ctrl.ti:g}")

    doc = {
        'k': ctrl.k,
        'ti': ctrl.ti,
        'poles': [complex_to_dict(p) for p in report.poles],
        'cancellation_detected': report.cancellation_detected,
        'vieta_residuals': list(report.vieta_residuals),
        'zeta': zeta,
        'note': note,
        'stable': stable,
        'ms': metrics.ms,
        'mt': metrics.mt,
        'pm_deg': metrics.pm_deg,
        'wgc': metrics.wgc,
    }
    print_document(doc, fmt, [
        f"K = {ctrl.k:.6g}, Ti = {ctrl.ti:.6g} s",
        f"闭环极点: {', '.join(format_complex(p) for p in report.poles)}",
        f"零极点对消: {yes_no(report.cancellation_detected)}",
        f"Vieta 残差: {', '.join(f'{r:.3e}' for r in report.vieta_residuals)}",
        note,
    ] + ([] if stable else [UNSTABLE_NOTE]) + [
        f"Ms  = {metrics.ms:.3f}",
        f"Mt  = {metrics.mt:.3f}",
        f"PM  = {metrics.pm_deg:.2f} deg",
        f"wgc = {metrics.wgc:.6g} rad/s",
    ])
    return EXIT_OK
