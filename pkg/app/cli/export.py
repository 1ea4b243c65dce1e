"""export 子命令：Nyquist / Bode / 阶跃响应数据导出为 CSV"""
import logging

import numpy as np

from app.cli.common import EXIT_OK, add_plant_arguments, validate_controller, validate_plant
from app.exceptions import InvalidParameter, InvalidRange

logger = logging.getLogger(__name__)

KINDS = ('nyquist', 'bode', 'step')


def register(subparsers):
    """注册 export 子命令"""
    parser = subparsers.add_parser('export', help='导出 Nyquist、Bode 或阶跃响应数据 (CSV)')
    parser.add_argument('kind', choices=KINDS, help='导出类型')
    add_plant_arguments(parser)
    parser.add_argument('--k', type=float, default=None, help='控制器增益 K（缺省为整定值）')
    parser.add_argument('--ti', type=float, default=None, help='积分时间 Ti（缺省为整定值）')
    parser.add_argument('--wmin', type=float, default=None, help='最低频率 rad/s，默认 1e-2/T2')
    parser.add_argument('--wmax', type=float, default=None, help='最高频率 rad/s，默认 1e2/T2')
    parser.add_argument('--points', type=int, default=None, help='频率点数，默认 500')
    parser.add_argument('--dt', type=float, default=None, help='阶跃仿真步长（秒）')
    parser.add_argument('--horizon', type=float, default=None, help='阶跃仿真时长（秒）')
    parser.add_argument('--out', default=None, help='输出文件，缺省写到标准输出')
    parser.set_defaults(func=run)


def omega_grid(args, services, plant):
    """由 --wmin/--wmax/--points 构造对数频率网格"""
    lo_default, hi_default = services.freq_domain.default_range(
        plant.t2, services.config.get_export_span_decades()
    )
    lo = lo_default if args.wmin is None else args.wmin
    hi = hi_default if args.wmax is None else args.wmax
    points = services.config.get_export_points() if args.points is None else args.points
    if points < 2:
        raise InvalidParameter(f"参数无效: points must be >= 2, got {points}")
    if not 0.0 < lo < hi:
        raise InvalidRange(f"频率区间无效: [{lo}, {hi}]")
    return np.geomspace(lo, hi, points)


def run(args, services) -> int:
    plant = validate_plant(args)
    ctrl = validate_controller(args, services, plant)
    logger.info(f"[CLI] export {args.kind}: Kp={plant.kp:g}, T1={plant.t1:g}, T2={plant.t2:g}, K={ctrl.k:g}, Ti={ctrl.ti:g}")

    export = services.export
    if args.kind == 'step':
        response = services.time_domain.simulate_closed_loop(plant, ctrl, args.dt, args.horizon)
        header, rows = export.step_table(plant, response, ctrl)
    elif args.kind == 'nyquist':
        header, rows = export.nyquist_table(plant, ctrl, omega_grid(args, services, plant))
    else:
        header, rows = export.bode_table(plant, ctrl, omega_grid(args, services, plant))

    export.write_csv(header, rows, args.out)
    return EXIT_OK
