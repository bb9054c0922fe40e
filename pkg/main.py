#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
双势垒量子快门瞬态模拟 - 命令行入口

子命令即运行模式（poles / snapshot / trace / timescales / validate / transmission），
场景来自扁平配置文件（--config）或登记表 config/scenarios.json（--scenario）。

退出码：0 成功；2 配置或用法错误；3 数值计算失败。
"""

import argparse
import os
import sys
from typing import Any, Dict, List, Optional

# 添加项目根目录到Python路径
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from utils.config_manager import ConfigManager, load_flat_config  # noqa: E402
from utils.errors import ConfigError, SimulationError  # noqa: E402
from utils.global_manager import LOG_LEVEL_ENV, global_manager, log_error, log_info  # noqa: E402
from utils.task import MODES, ScenarioConfig, get_task_manager, run_scenario  # noqa: E402
from utils.task.task_manager import USER_SETTINGS  # noqa: E402

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_INTERRUPTED = 130


def parse_seed_scan(text: str) -> str:
    """'10:200' 或 '10:200:meV' → '10:200'"""
    parts = text.split(':')
    if len(parts) == 3 and parts[2].strip().lower() == 'mev':
        parts = parts[:2]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"--seed-scan 应为 Emin:Emax[:meV]，得到 {text}")
    return ':'.join(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='rtd-shutter', description="双势垒结构量子快门瞬态模拟")
    subparsers = parser.add_subparsers(dest='command')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="扁平 key = value 场景文件")
    common.add_argument('--scenario', help="config/scenarios.json 中的场景名")
    common.add_argument('--out', help="输出目录")
    common.add_argument('--poles', type=int, help="级数中的极点数 N")
    common.add_argument('--seed-scan', type=parse_seed_scan, help="实轴极点扫描区间 Emin:Emax[:meV]")
    common.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help=f"日志级别（默认读取环境变量 {LOG_LEVEL_ENV}）")

    for mode in MODES:
        subparsers.add_parser(mode, parents=[common], help=f"{mode} 模式")
    subparsers.add_parser('list', help="列出登记的场景")
    return parser


def configure_logging(cli_level: Optional[str], settings: ConfigManager):
    """命令行 > 环境变量 > 用户设置"""
    level = cli_level or os.environ.get(LOG_LEVEL_ENV) or settings.get('general.log_level')
    if level:
        global_manager.set_log_level(level)


def resolve_config(args: argparse.Namespace) -> ScenarioConfig:
    """
    由命令行参数得到场景配置

    Raises:
        ConfigError: 未给出配置来源或配置非法
    """
    overrides: Dict[str, Any] = {
        'mode': args.command,
        'output_dir': args.out,
        'poles': args.poles,
        'seed_scan_mev': args.seed_scan,
    }
    if args.config and args.scenario:
        raise ConfigError("--config 与 --scenario 只能给出一个")
    if args.config:
        return ScenarioConfig.from_flat(load_flat_config(args.config), overrides)
    if args.scenario:
        manager = get_task_manager()
        info = manager.get_scenario(args.scenario)
        if info is not None and os.path.splitext(info.script_file)[0] != args.command:
            raise ConfigError(f"场景 {args.scenario} 属于 {os.path.splitext(info.script_file)[0]} 模式，"
                              f"不是 {args.command}", field='scenario')
        return manager.build_config(args.scenario, overrides)
    raise ConfigError("需要 --config 或 --scenario 指定场景")


def list_scenarios() -> int:
    manager = get_task_manager()
    for category in manager.categories:
        print(f"[{category}]")
        for info in manager.get_scenarios_by_category(category):
            mode = os.path.splitext(info.script_file)[0]
            print(f"  {info.scenario_id:<16} {mode:<12} {info.description}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG

    settings = ConfigManager(USER_SETTINGS)
    if args.command == 'list':
        return list_scenarios()
    configure_logging(args.log_level, settings)

    try:
        config = resolve_config(args)
        result = run_scenario(config, args.scenario)
    except ConfigError as e:
        log_error(f"配置错误: {e}")
        return EXIT_CONFIG
    except SimulationError as e:
        operation = global_manager.get('run.failed_operation')
        log_error(f"数值计算失败（操作 {operation}）: {e}")
        return EXIT_NUMERICAL
    except KeyboardInterrupt:
        log_error("程序被用户中断")
        return EXIT_INTERRUPTED

    log_info(f"{result.mode} 完成，用时 {result.elapsed:.1f} s，清单 {result.manifest}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
