"""verify 子命令：逐格复现两张结果表"""
import logging

from app.cli.common import EXIT_OK, EXIT_VERIFY_FAILED, add_format_argument, output_format, print_document

logger = logging.getLogger(__name__)

# 参考结果表中各列的小数位
CELL_DECIMALS = {
    'K': 2,
    'Ti': 1,
    'pole1': 0,
    'pole2': 2,
    'pole3': 2,
    'Ts': 3,
    'Ts_pred': 3,
    'PO': 3,
    'Monotonic': 0,
    'Mt': 3,
    'Ms': 3,
    'PM': 2,
}


def register(subparsers):
    """注册 verify 子命令"""
    parser = subparsers.add_parser('verify', help='复现六个内置对象的参数表与性能表')
    parser.add_argument('--dt', type=float, default=None, help='仿真步长（秒），默认 0.005')
    parser.add_argument('--band', type=float, default=None, help='稳定带比例，默认 0.02')
    add_format_argument(parser)
    parser.set_defaults(func=run)


def cell_status(cell) -> str:
    if cell.skipped:
        return 'N/A'
    return 'PASS' if cell.passed else 'FAIL'


def format_cell(cell) -> str:
    digits = CELL_DECIMALS.get(cell.name, 6)
    if cell.name == 'Monotonic':
        value = 'YES' if cell.actual else 'NO'
    else:
        value = f"{cell.actual:.{digits}f}"
    return f"{cell.name}={value} [{cell_status(cell)}]"


def cell_to_dict(cell) -> dict:
    return {
        'name': cell.name,
        'actual': cell.actual,
        'expected': cell.expected,
        'delta': cell.delta,
        'tolerance': cell.tolerance,
        'pass': None if cell.skipped else cell.passed,
    }


def run(args, services) -> int:
    fmt = output_format(args, services)
    dt = services.config.get_dt() if args.dt is None else args.dt
    band = services.config.get_band() if args.band is None else args.band
    logger.info(f"[CLI] verify: dt={dt:g}, band={band:g}")

    outcome = services.verification.verify(dt, band)

    doc = {
        'all_pass': outcome.all_pass,
        'dt': outcome.dt,
        'band': outcome.band,
        'parameters': [
            {
                'plant_id': row.plant_id,
                'kp': row.plant.kp,
                't1': row.plant.t1,
                't2': row.plant.t2,
                'k': row.k,
                'ti': row.ti,
                'poles': [p.real for p in row.poles],
                'pass': row.passed,
                'cells': [cell_to_dict(c) for c in row.cells],
            }
            for row in outcome.parameter_rows
        ],
        'performance': [
            {
                'plant_id': row.plant_id,
                'ts': row.ts,
                'po': row.po,
                'monotonic': row.monotonic,
                'mt': row.mt,
                'ms': row.ms,
                'pm_deg': row.pm,
                'pass': row.passed,
                'cells': [cell_to_dict(c) for c in row.cells],
            }
            for row in outcome.performance_rows
        ],
        'failures': outcome.failures(),
    }

    lines = [f"参数表 (dt={outcome.dt:g}s, 稳定带={outcome.band:.1%})"]
    for row in outcome.parameter_rows:
        lines.append(
            f"  #{row.plant_id} Kp={row.plant.kp:g} T1={row.plant.t1:.4g} T2={row.plant.t2:.4g}  "
            + '  '.join(format_cell(c) for c in row.cells)
        )
    lines.append("性能表")
    for row in outcome.performance_rows:
        lines.append(f"  #{row.plant_id}  " + '  '.join(format_cell(c) for c in row.cells))
    if outcome.all_pass:
        lines.append("结论: 全部单元格通过")
    else:
        lines.append("结论: 存在失败单元格")
        lines.extend(f"  - {failure}" for failure in outcome.failures())
    print_document(doc, fmt, lines)

    return EXIT_OK if outcome.all_pass else EXIT_VERIFY_FAILED
