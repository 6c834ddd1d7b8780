#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
基础工作流类
各流水线阶段共用的产物路径、依赖检查与JSON读写
"""

import json
import logging
import time
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict

from .config_manager import PipelineConfig
from .errors import DependencyError

logger = logging.getLogger(__name__)


class ArtifactLayout:
    """
    输出目录结构

    Args:
        out_dir: 输出根目录
    """

    def __init__(self, out_dir: str):
        self.root = Path(out_dir)

    @property
    def store_dir(self) -> Path:
        return self.root / "store"

    @property
    def papers(self) -> Path:
        return self.store_dir / "papers.tsv"

    @property
    def institutions(self) -> Path:
        return self.store_dir / "institutions.tsv"

    @property
    def ingest_stats(self) -> Path:
        return self.store_dir / "ingest_stats.json"

    def corpus_dir(self, venue: str) -> Path:
        return self.root / "corpus" / venue

    def corpus_manifest(self, venue: str) -> Path:
        return self.corpus_dir(venue) / "manifest.txt"

    def annotations(self, venue: str) -> Path:
        return self.root / "annotations" / f"{venue}.tsv"

    def reports_dir(self, venue: str) -> Path:
        return self.root / "reports" / venue

    @property
    def run_manifest(self) -> Path:
        return self.root / "run_manifest.json"


class BaseWorkflow(ABC):
    """基础工作流类"""

    #: 阶段名称，用于横幅与运行清单
    name = ""
    title = ""

    def __init__(self, config: PipelineConfig):
        """
        初始化基础工作流

        Args:
            config: 已校验的流水线配置
        """
        self.config = config
        self.layout = ArtifactLayout(config.out_dir)

    def require(self, path: Path, hint: str = "") -> Path:
        """
        检查上游产物

        Raises:
            DependencyError: 产物不存在
        """
        if not path.exists():
            raise DependencyError(str(path), hint)
        return path

    def save_json_report(self, data: Dict, file_path: Path) -> None:
        """
        保存JSON报告，键排序

        Args:
            data: 要保存的数据
            file_path: 文件路径
        """
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, "w", encoding="utf-8", newline="") as f:
            json.dump(data, f, ensure_ascii=False, indent=2, sort_keys=True)
            f.write("\n")

    def load_json_report(self, file_path: Path) -> Dict:
        """
        加载JSON报告

        Args:
            file_path: 文件路径

        Returns:
            报告数据
        """
        self.require(file_path)
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f)

    def run(self, **kwargs) -> Dict[str, Any]:
        """打印阶段横幅并计时执行"""
        print(f"=== {self.title} ===")
        started = time.perf_counter()
        logger.info(f"阶段 {self.name} 开始")
        result = self.execute(**kwargs)
        logger.info(f"阶段 {self.name} 完成，用时 {time.perf_counter() - started:.2f} 秒")
        return result

    @abstractmethod
    def execute(self, **kwargs) -> Dict[str, Any]:
        """
        执行工作流

        Returns:
            写入运行清单的执行结果
        """
        pass


class WorkflowManager:
    """工作流管理器"""

    def __init__(self):
        self.workflows: Dict[str, BaseWorkflow] = {}

    def register_workflow(self, name: str, workflow: BaseWorkflow) -> None:
        """
        注册工作流

        Args:
            name: 工作流名称
            workflow: 工作流实例
        """
        self.workflows[name] = workflow

    def execute_workflow(self, name: str, **kwargs) -> Dict[str, Any]:
        """
        执行指定工作流

        Args:
            name: 工作流名称
            **kwargs: 工作流参数

        Returns:
            执行结果
        """
        if name not in self.workflows:
            raise ValueError(f"未找到工作流: {name}")

        return self.workflows[name].run(**kwargs)
