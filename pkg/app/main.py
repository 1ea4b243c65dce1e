"""命令行主入口"""
import argparse
import logging
import sys
from typing import List, Optional

from app.cli import COMMANDS
from app.cli.common import EXIT_IO, EXIT_NOT_SETTLED, EXIT_USAGE, build_services
from app.config import Config
from app.exceptions import NotSettled

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def build_parser() -> argparse.ArgumentParser:
    """构造参数解析器并注册全部子命令"""
    parser = argparse.ArgumentParser(
        prog='pi-tuning',
        description='二阶对象 PI 控制器闭式整定、阶跃仿真与鲁棒性分析',
    )
    parser.add_argument('--config', default=None, help='配置文件路径（缺省为环境变量 PI_TUNING_CONFIG 或 config.ini）')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='输出日志，-vv 输出调试日志')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def configure_logging(cfg: Config, verbose: int):
    """日志输出到标准错误，-v 提升到 INFO，-vv 提升到 DEBUG"""
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, cfg.get_log_level(), logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[List[str]] = None) -> int:
    """执行一条命令并返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    cfg = Config(args.config)
    configure_logging(cfg, args.verbose)
    services = build_services(cfg)

    try:
        return args.func(args, services)
    except NotSettled as e:
        logger.error(f"[CLI] 未进入稳定带: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_NOT_SETTLED
    except ValueError as e:
        logger.error(f"[CLI] 参数错误: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"[CLI] 文件写入失败: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_IO
    except Exception as e:
        logger.exception(f"[CLI] 未预期的错误: {e}")
        raise


if __name__ == "__main__":
    sys.exit(main())
