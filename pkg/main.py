#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
科学计量分析工具 - 命令行版本
导入元数据 -> 抽取期刊/会议语料 -> 主题分类 -> 生成报告
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.config_manager import ConfigManager, PipelineConfig, get_config_manager
from src.errors import ConfigError, DependencyError, ScientometricsError
from src.pipeline import COMMANDS, run
from src.synthetic import write_synthetic_fixture

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEPENDENCY = 2
EXIT_DATA = 3


class CommandParser(argparse.ArgumentParser):
    """用法错误以状态码1退出，状态码2留给依赖错误"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: 错误: {message}\n")


def setup_logging(log_file: str, level: str = "INFO") -> None:
    """配置日志：文件与控制台同时输出"""
    Path(log_file).parent.mkdir(parents=True, exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file, encoding='utf-8'),
            logging.StreamHandler()
        ],
        force=True,
    )


def create_parser() -> argparse.ArgumentParser:
    """创建命令行参数解析器"""
    parser = CommandParser(description="科学计量分析工具")

    # 创建子命令解析器
    subparsers = parser.add_subparsers(dest='command', help='可用命令')

    # 通用参数组
    common_group = argparse.ArgumentParser(add_help=False)
    common_group.add_argument("--config", default="config.ini", help="配置文件路径")
    common_group.add_argument("--venue", action="append", help="只处理指定的逻辑期刊/会议（可重复）")
    common_group.add_argument("--threshold", type=float, help="分类相似度阈值 (0, 1]")
    common_group.add_argument("--start-year", type=int, help="趋势分析起始年份")
    common_group.add_argument("--end-year", type=int, help="趋势分析结束年份")
    common_group.add_argument("--strict", action="store_true", help="严格模式：遇到错误行即中止")
    common_group.add_argument("--out", help="输出目录")
    common_group.add_argument("--stopwords", help="停用词表路径")
    common_group.add_argument("--verbose", action="store_true", help="输出调试日志")

    stage_help = {
        "ingest": "导入元数据转储",
        "extract": "抽取期刊/会议语料（accepted/citing/cited）",
        "classify": "对 accepted 文献做主题分类",
        "report": "生成全部报告",
        "all": "执行完整流程: ingest→extract→classify→report",
    }
    for command in COMMANDS:
        subparsers.add_parser(command, help=stage_help[command], parents=[common_group])

    # synth 子命令
    synth_parser = subparsers.add_parser('synth', help='生成合成数据与配置文件')
    synth_parser.add_argument("--dir", default="synthetic", help="输出目录 (默认: synthetic)")
    synth_parser.add_argument("--papers", type=int, default=200, help="文献数 (默认: 200)")
    synth_parser.add_argument("--seed", type=int, default=7, help="随机种子 (默认: 7)")
    synth_parser.add_argument("--no-noise", action="store_true", help="不追加格式错误行与重复行")

    # config 子命令
    config_parser = subparsers.add_parser('config', help='显示或保存合并后的配置', parents=[common_group])
    config_parser.add_argument('action', nargs='?', choices=['show', 'save'], default='show', help='show 或 save')
    config_parser.add_argument('path', nargs='?', help='save 的目标文件路径')

    return parser


def load_config(args: argparse.Namespace) -> PipelineConfig:
    """读取配置文件并应用命令行覆盖项（命令行优先）"""
    config = get_config_manager(args.config).get_pipeline_config()
    config = config.with_overrides(
        threshold=args.threshold,
        start_year=args.start_year,
        end_year=args.end_year,
        out_dir=args.out,
        stopwords=str(Path(args.stopwords).resolve()) if args.stopwords else None,
        mode="strict" if args.strict else None,
    )
    config = config.select_venues(tuple(args.venue) if args.venue else None)
    return config.validate()


def main(argv: Optional[List[str]] = None) -> int:
    """
    命令行入口

    Returns:
        退出码：0 成功，1 用法/配置错误，2 缺少上游产物，3 数据错误
    """
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    command = args.command
    if not command:
        parser.print_help()
        return EXIT_USAGE

    if command == 'synth':
        if args.papers < 1:
            print("错误: --papers 必须 >= 1")
            return EXIT_USAGE
        config_path = write_synthetic_fixture(args.dir, args.papers, args.seed, noise=not args.no_noise,
                                              progress=True)
        print(f"合成数据已写出，配置文件: {config_path}")
        return EXIT_OK

    try:
        config = load_config(args)
    except ConfigError as e:
        print(f"配置错误: {e}")
        return EXIT_USAGE

    setup_logging(config.log_file, "DEBUG" if args.verbose else config.log_level)

    if command == 'config':
        if args.action == 'save':
            if not args.path:
                print("用法: python main.py config save <配置文件路径>")
                return EXIT_USAGE
            ConfigManager.save_config_to_file(args.path, config.as_sections())
            print(f"配置已保存到: {args.path}")
        else:
            print(json.dumps(config.as_dict(), ensure_ascii=False, indent=2, sort_keys=True))
        return EXIT_OK

    try:
        run(command, config)
    except ConfigError as e:
        logger.error(f"配置错误: {e}")
        print(f"配置错误: {e}")
        return EXIT_USAGE
    except DependencyError as e:
        logger.error(str(e))
        print(f"错误: {e}")
        return EXIT_DEPENDENCY
    except (ScientometricsError, OSError, ValueError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"错误: {e}")
        return EXIT_DATA

    print("=== 操作完成 ===")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
