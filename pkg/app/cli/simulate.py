"""simulate 子命令：整定闭环的阶跃响应仿真"""
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

logger = logging.getLogger(__name__)


def register(subparsers):
    """注册 simulate 子命令"""
    parser = subparsers.add_parser('simulate', help='仿真整定闭环的单位阶跃响应')
    add_plant_arguments(parser)
    parser.add_argument('--dt', type=float, default=None, help='仿真步长（秒），默认 0.005')
    parser.add_argument('--band', type=float, default=None, help='稳定带比例，默认 0.02')
    parser.add_argument('--horizon', type=float, default=None, help='仿真时长（秒），默认 30*max(T1, 2*T2)')
    parser.add_argument('--out', default=None, help='写出 t,y,y_analytic 的 CSV 文件')
    add_format_argument(parser)
    parser.set_defaults(func=run)


def run(args, services) -> int:
    plant = validate_plant(args)
    fmt = output_format(args, services)
    band = services.config.get_band() if args.band is None else args.band
    dt = services.config.get_dt() if args.dt is None else args.dt
    logger.info(f"[CLI] simulate: Kp={plant.kp:g}, T1={plant.t1:g}, T2={plant.t2:g}, dt={dt:g}, band={band:g}")

    td = services.time_domain
    ctrl = services.tuning.tune_pi(plant)
    response = td.simulate_closed_loop(plant, ctrl, dt, args.horizon)
    metrics = td.step_metrics(response, band)
    predicted = 2.0 * plant.t2 * td.settling_constant(band)

    if args.out:
        header, rows = services.export.step_table(plant, response)
        services.export.write_csv(header, rows, args.out)

    doc = {
        'k': ctrl.k,
        'ti': ctrl.ti,
        'ts': metrics.ts,
        'ts_predicted': predicted,
        'po': metrics.po,
        'monotonic': metrics.monotonic,
        'rise_time': metrics.rise_time,
        'dt': dt,
        'band': band,
        'out': args.out,
    }
    lines = [
        f"Ts        = {metrics.ts:.3f} s (预测 2*T2*tau* = {predicted:.3f} s)",
        f"PO        = {metrics.po:.3f} %",
        f"Monotonic = {yes_no(metrics.monotonic)}",
        f"Tr(10-90) = {metrics.rise_time:.3f} s",
    ]
    if args.out:
        lines.append(f"阶跃响应已写出: {args.out}")
    print_document(doc, fmt, lines)
    return EXIT_OK
