"""命令行子命令"""
from . import analyze, export, simulate, sweep, tune, verify

COMMANDS = (tune, analyze, simulate, verify, export, sweep)

__all__ = ['COMMANDS']
